#include "afem/history.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "afem/errors.hpp"

namespace afem {

double convergence_rate(double e_prev, double e, std::size_t n_prev, std::size_t n) {
  return std::log(e_prev / e) / std::log(static_cast<double>(n) / static_cast<double>(n_prev));
}

ConvergenceHistory convergence_rate(ConvergenceHistory history) {
  if (history.levels.size() < 2) {
    throw Error(ErrorCode::InsufficientLevels, "rates need at least two levels");
  }
  auto& lv = history.levels;
  for (std::size_t l = 1; l < lv.size(); ++l) {
    const auto n0 = lv[l - 1].ndof;
    const auto n1 = lv[l].ndof;
    lv[l].rate_u = convergence_rate(lv[l - 1].e_u, lv[l].e_u, n0, n1);
    lv[l].rate_p = convergence_rate(lv[l - 1].e_p, lv[l].e_p, n0, n1);
    lv[l].rate_eta = convergence_rate(lv[l - 1].eta, lv[l].eta, n0, n1);
  }
  return history;
}

void derive_ratios(LevelRecord& r) {
  const double hdiv = std::sqrt(r.e_p * r.e_p + r.e_div * r.e_div);
  r.c_rel = (hdiv + r.e_u) / r.eta;
  r.efficiency = r.eta / r.e_p;
}

namespace {

std::string field(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, int line) {
  if (s.empty()) return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

std::string table_cell(double v, int precision, bool fixed) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, fixed ? "%.*f" : "%.*e", precision, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const ConvergenceHistory& h) {
  out << kCsvHeader << '\n';
  for (const auto& r : h.levels) {
    out << r.level << ',' << r.ndof << ',' << field(r.e_u) << ',' << field(r.rate_u) << ',' << field(r.e_p) << ','
        << field(r.rate_p) << ',' << field(r.e_div) << ',' << field(r.eta) << ',' << field(r.rate_eta) << ','
        << field(r.c_rel) << ',' << field(r.efficiency) << '\n';
  }
}

std::vector<LevelRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::ParseError, "missing or unexpected CSV header");
  }
  std::vector<LevelRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 11) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 11 fields");
    }
    LevelRecord r;
    r.level = static_cast<int>(parse_field(cells[0], lineno));
    r.ndof = static_cast<std::size_t>(parse_field(cells[1], lineno));
    r.e_u = parse_field(cells[2], lineno);
    r.rate_u = parse_field(cells[3], lineno);
    r.e_p = parse_field(cells[4], lineno);
    r.rate_p = parse_field(cells[5], lineno);
    r.e_div = parse_field(cells[6], lineno);
    r.eta = parse_field(cells[7], lineno);
    r.rate_eta = parse_field(cells[8], lineno);
    r.c_rel = parse_field(cells[9], lineno);
    r.efficiency = parse_field(cells[10], lineno);
    out.push_back(r);
  }
  return out;
}

void write_table(std::ostream& out, const ConvergenceHistory& h) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%5s %8s %12s %8s %12s %8s %12s %12s %8s %9s %9s\n", "level", "Ndof", "e_u",
                "CR(e_u)", "e_p", "CR(e_p)", "e_div", "eta", "CR(eta)", "C_rel", "eta/e_p");
  out << buf;
  for (const auto& r : h.levels) {
    std::snprintf(buf, sizeof buf, "%5d %8zu %12s %8s %12s %8s %12s %12s %8s %9s %9s\n", r.level, r.ndof,
                  table_cell(r.e_u, 5, false).c_str(), table_cell(r.rate_u, 4, true).c_str(),
                  table_cell(r.e_p, 5, false).c_str(), table_cell(r.rate_p, 4, true).c_str(),
                  table_cell(r.e_div, 5, false).c_str(), table_cell(r.eta, 5, false).c_str(),
                  table_cell(r.rate_eta, 4, true).c_str(), table_cell(r.c_rel, 3, true).c_str(),
                  table_cell(r.efficiency, 3, true).c_str());
    out << buf;
  }
}

}  // namespace afem

// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsp/milp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "rsp/error.hpp"

namespace rsp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class RowWriter {
 public:
  void term(double coef, const std::string& var) {
    if (coef == 0.0) return;
    line_ += coef < 0.0 ? " - " : " + ";
    line_ += num(std::abs(coef));
    line_ += ' ';
    line_ += var;
    empty_ = false;
  }
  bool empty() const { return empty_; }
  std::string finish(const std::string& op, double rhs) const {
    return line_ + " " + op + " " + num(rhs);
  }
  const std::string& text() const { return line_; }

 private:
  std::string line_;
  bool empty_ = true;
};

std::string var(char prefix, std::size_t i) { return prefix + std::to_string(i); }

}  // namespace

std::string export_milp(const PlacementProblem& p) {
  const std::size_t nl = p.n_lidar(), nr = p.n_radar(), nt = p.n_cells();
  std::vector<double> big_m(nt, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    double mass = 0.0;
    for (std::size_t i = 0; i < nl; ++i) mass += p.vl(i, j);
    for (std::size_t i = 0; i < nr; ++i) mass += p.vr(i, j);
    big_m[j] = p.weights[j] * mass;
  }

  std::ostringstream out;
  out << "\\ Budgeted lidar/radar placement: " << nl << " lidar, " << nr
      << " radar candidates, " << nt << " cells, tau " << num(p.tau) << "\n";
  out << "Maximize\n";
  {
    RowWriter obj;
    for (std::size_t j = 0; j < nt; ++j) obj.term(1.0, var('z', j));
    out << " obj:" << obj.text() << "\n";
  }
  out << "Subject To\n";
  if (nl + nr > 0) {
    RowWriter row;
    for (std::size_t i = 0; i < nl; ++i) row.term(1.0, var('x', i));
    for (std::size_t i = 0; i < nr; ++i) row.term(1.0, var('y', i));
    out << " budget:" << row.finish("<=", p.budget) << "\n";
  }
  if (p.cost_limit && nl + nr > 0) {
    RowWriter row;
    for (std::size_t i = 0; i < nl; ++i) row.term(p.vl.row_costs[i], var('x', i));
    for (std::size_t i = 0; i < nr; ++i) row.term(p.vr.row_costs[i], var('y', i));
    if (!row.empty()) out << " cost:" << row.finish("<=", *p.cost_limit) << "\n";
  }
  for (std::size_t j = 0; j < nt; ++j) {
    RowWriter lv;
    for (std::size_t i = 0; i < nl; ++i) lv.term(p.ll(i, j), var('x', i));
    lv.term(-p.tau, var('t', j));
    out << " lvis" << j << ":" << lv.finish(">=", 0.0) << "\n";
    RowWriter rv;
    for (std::size_t i = 0; i < nr; ++i) rv.term(p.lr(i, j), var('y', i));
    rv.term(-p.tau, var('t', j));
    out << " rvis" << j << ":" << rv.finish(">=", 0.0) << "\n";
  }
  for (std::size_t j = 0; j < nt; ++j) {
    const std::string z = var('z', j), t = var('t', j);
    RowWriter zt;
    zt.term(1.0, z);
    zt.term(-big_m[j], t);
    out << " zt" << j << ":" << zt.finish("<=", 0.0) << "\n";

    auto rho_terms = [&](RowWriter& row) {
      for (std::size_t i = 0; i < nl; ++i) row.term(-p.weights[j] * p.vl(i, j), var('x', i));
      for (std::size_t i = 0; i < nr; ++i) row.term(-p.weights[j] * p.vr(i, j), var('y', i));
    };
    RowWriter zr;
    zr.term(1.0, z);
    rho_terms(zr);
    out << " zrho" << j << ":" << zr.finish("<=", 0.0) << "\n";

    RowWriter zl;
    zl.term(1.0, z);
    rho_terms(zl);
    zl.term(-big_m[j], t);
    out << " zlo" << j << ":" << zl.finish(">=", -big_m[j]) << "\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < nt; ++j) {
    out << " 0 <= " << var('z', j) << " <= " << num(big_m[j]) << "\n";
  }
  out << "Binaries\n";
  for (std::size_t i = 0; i < nl; ++i) out << " " << var('x', i) << "\n";
  for (std::size_t i = 0; i < nr; ++i) out << " " << var('y', i) << "\n";
  for (std::size_t j = 0; j < nt; ++j) out << " " << var('t', j) << "\n";
  out << "End\n";
  return out.str();
}

std::vector<std::string> LpModel::variables() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto add = [&](const std::string& v) {
    if (seen.insert(v).second) out.push_back(v);
  };
  for (const auto& [v, c] : objective) add(v);
  for (const auto& row : rows) {
    for (const auto& [v, c] : row.terms) add(v);
  }
  for (const auto& [v, b] : bounds) add(v);
  for (const auto& v : binaries) add(v);
  return out;
}

std::vector<std::string> LpModel::continuous() const {
  std::vector<std::string> out;
  for (const auto& v : variables()) {
    if (!binaries.contains(v)) out.push_back(v);
  }
  return out;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> parse_number(const std::string& tok) {
  const std::string t = lower(tok);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') return std::nullopt;
  return v;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Parses "+ 2 x - y + 3.5 z" style linear expressions.
std::vector<std::pair<std::string, double>> parse_terms(const std::vector<std::string>& toks,
                                                        std::size_t line) {
  std::vector<std::pair<std::string, double>> out;
  double sign = 1.0;
  std::optional<double> coef;
  for (const auto& tok : toks) {
    if (tok == "+") continue;
    if (tok == "-") {
      sign = -sign;
      continue;
    }
    if (auto v = parse_number(tok)) {
      if (coef) throw ParseError("two coefficients in a row", line);
      coef = *v;
      continue;
    }
    std::string name = tok;
    if (name[0] == '-' || name[0] == '+') {
      if (name[0] == '-') sign = -sign;
      name.erase(0, 1);
    }
    out.emplace_back(name, sign * coef.value_or(1.0));
    sign = 1.0;
    coef.reset();
  }
  if (coef) throw ParseError("dangling coefficient", line);
  return out;
}

}  // namespace

LpModel parse_lp(std::string_view text) {
  enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };
  LpModel model;
  Section section = Section::kNone;
  std::size_t line_no = 0;
  bool saw_end = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto bs = raw.find('\\'); bs != std::string::npos) raw.erase(bs);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string key = lower(line);
    if (key == "maximize" || key == "maximum" || key == "max") {
      model.sense = LpModel::Sense::kMaximize;
      section = Section::kObjective;
      continue;
    }
    if (key == "minimize" || key == "minimum" || key == "min") {
      model.sense = LpModel::Sense::kMinimize;
      section = Section::kObjective;
      continue;
    }
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      section = Section::kConstraints;
      continue;
    }
    if (key == "bounds" || key == "bound") {
      section = Section::kBounds;
      continue;
    }
    if (key == "binaries" || key == "binary" || key == "bin") {
      section = Section::kBinaries;
      continue;
    }
    if (key == "generals" || key == "general" || key == "gen") {
      section = Section::kGenerals;
      continue;
    }
    if (key == "end") {
      section = Section::kEnd;
      saw_end = true;
      continue;
    }

    std::string body = line;
    std::string name;
    if (auto colon = body.find(':'); colon != std::string::npos) {
      name = trim(body.substr(0, colon));
      body = body.substr(colon + 1);
    }
    auto toks = tokens(body);
    switch (section) {
      case Section::kObjective:
        for (auto& t : parse_terms(toks, line_no)) model.objective.push_back(std::move(t));
        break;
      case Section::kConstraints: {
        auto op_it = std::find_if(toks.begin(), toks.end(), [](const std::string& t) {
          return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" ||
                 t == ">";
        });
        if (op_it == toks.end() || op_it + 2 != toks.end()) {
          throw ParseError("constraint needs 'expr op rhs' on one line", line_no, name);
        }
        LpModel::Row row;
        row.name = name.empty() ? "r" + std::to_string(model.rows.size()) : name;
        row.terms = parse_terms({toks.begin(), op_it}, line_no);
        const std::string& op = *op_it;
        row.op = (op[0] == '<' || op == "=<")   ? LpModel::Op::kLe
                 : (op[0] == '>' || op == "=>") ? LpModel::Op::kGe
                                                : LpModel::Op::kEq;
        auto rhs = parse_number(*(op_it + 1));
        if (!rhs) throw ParseError("bad right-hand side '" + *(op_it + 1) + "'", line_no, name);
        row.rhs = *rhs;
        model.rows.push_back(std::move(row));
        break;
      }
      case Section::kBounds: {
        if (toks.size() == 5 && (toks[1] == "<=" && toks[3] == "<=")) {
          auto lo = parse_number(toks[0]);
          auto hi = parse_number(toks[4]);
          if (!lo || !hi) throw ParseError("bad bound", line_no, toks[2]);
          model.bounds[toks[2]] = {*lo, *hi};
        } else if (toks.size() == 3 && (toks[1] == "<=" || toks[1] == ">=" || toks[1] == "=")) {
          auto v = parse_number(toks[2]);
          if (!v) throw ParseError("bad bound", line_no, toks[0]);
          auto [it, inserted] = model.bounds.try_emplace(
              toks[0], 0.0, std::numeric_limits<double>::infinity());
          if (toks[1] == "<=") it->second.second = *v;
          if (toks[1] == ">=") it->second.first = *v;
          if (toks[1] == "=") it->second = {*v, *v};
        } else if (toks.size() == 2 && lower(toks[1]) == "free") {
          model.bounds[toks[0]] = {-std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity()};
        } else {
          throw ParseError("unsupported bound syntax", line_no);
        }
        break;
      }
      case Section::kBinaries:
        for (auto& t : toks) model.binaries.insert(t);
        break;
      case Section::kGenerals:
        throw ParseError("general integers are not supported", line_no);
      case Section::kNone:
        throw ParseError("content before the objective section", line_no);
      case Section::kEnd:
        throw ParseError("content after End", line_no);
    }
  }
  if (!saw_end) throw ParseError("missing End (truncated file?)", line_no);
  return model;
}

}  // namespace rsp

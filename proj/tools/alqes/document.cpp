#include "document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace alqes::cli {

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

// Rationals serialize as JSON numbers when integral, strings otherwise.
std::string json_rational(const Rational& r) {
  return r.is_integer() ? r.str() : json_escape(r.str());
}

const char* period_str(PeriodClass c) { return c == PeriodClass::two_k ? "2K" : "4K"; }
const char* parity_str(Parity p) { return p == Parity::even ? "even" : "odd"; }

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Left-justified column layout with a two-space gutter.
std::string format_columns(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line.append(width[c] - row[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

std::optional<double> paper_shift(const Rational& a, const Rational& b, double m) {
  if (a == Rational(2) && b == Rational(1)) return -4.0 * m;
  if (a == Rational(7, 2) && b == Rational(1, 2))
    return -2.0 - 29.0 * m / 4.0 + std::sqrt(4.0 - 4.0 * m + 25.0 * m * m);
  return std::nullopt;
}

std::string eigenfunction_descriptor(const SolvabilityRecord& r) {
  std::string d;
  if (r.alpha == Rational(1)) d += "cn(x) ";
  if (r.beta != Rational(0)) {
    if (r.beta == Rational(1))
      d += "dn(x) ";
    else
      d += "dn(x)^{" + r.beta.str() + "} ";
  }
  d += "P" + std::to_string(r.n) + "(sn x)";
  return d;
}

SolutionDocument make_document(const PotentialParams& p) {
  SolutionDocument doc{p, evaluate_sets(p), solve_band_edges(p), {}, std::nullopt, 0};
  doc.degeneracy_group.assign(doc.solutions.size(), -1);
  int next_group = 0;
  for (size_t i = 0; i < doc.solutions.size(); ++i) {
    if (doc.solutions[i].degeneracy_partners.empty() || doc.degeneracy_group[i] != -1) continue;
    doc.degeneracy_group[i] = next_group;
    for (int j : doc.solutions[i].degeneracy_partners)
      doc.degeneracy_group[static_cast<size_t>(j)] = next_group;
    ++next_group;
  }
  return doc;
}

std::string render_json(const SolutionDocument& doc) {
  std::string j = "{\n";
  j += "  \"params\": {\n";
  j += "    \"a\": " + json_escape(doc.params.a.str()) + ",\n";
  j += "    \"b\": " + json_escape(doc.params.b.str()) + ",\n";
  j += "    \"m\": " + fmt(doc.params.m.value()) + ",\n";
  j += "    \"shift\": " + fmt(doc.params.shift) + "\n";
  j += "  },\n";

  j += "  \"records\": [\n";
  for (size_t i = 0; i < doc.records.size(); ++i) {
    const SetEvaluation& ev = doc.records[i];
    j += "    {\n";
    j += "      \"set_id\": " + std::to_string(ev.set.set_id) + ",\n";
    j += "      \"b1\": " + json_rational(ev.set.b1) + ",\n";
    j += "      \"d1\": " + json_rational(ev.set.d1) + ",\n";
    j += "      \"n\": " + json_rational(ev.n_exact) + ",\n";
    j += "      \"admissible\": " + bool_str(ev.admissible);
    if (ev.admissible) {
      j += ",\n";
      j += "      \"alpha\": " + json_rational(ev.record.alpha) + ",\n";
      j += "      \"beta\": " + json_rational(ev.record.beta) + ",\n";
      j += "      \"parity\": \"" + std::string(parity_str(ev.record.poly_parity)) + "\",\n";
      j += "      \"period_class\": \"" + std::string(period_str(ev.record.period_class)) +
           "\",\n";
      j += "      \"li_count\": " + std::to_string(ev.record.li_count) + "\n";
    } else {
      j += "\n";
    }
    j += i + 1 < doc.records.size() ? "    },\n" : "    }\n";
  }
  j += "  ],\n";

  j += "  \"solutions\": [\n";
  for (size_t i = 0; i < doc.solutions.size(); ++i) {
    const BandEdgeSolution& s = doc.solutions[i];
    j += "    {\n";
    j += "      \"energy\": " + fmt(s.energy) + ",\n";
    j += "      \"energy_unshifted\": " + fmt(s.energy_unshifted) + ",\n";
    j += "      \"set_id\": " + std::to_string(s.record.residue_set.set_id) + ",\n";
    j += "      \"n\": " + std::to_string(s.record.n) + ",\n";
    j += "      \"alpha\": " + json_rational(s.record.alpha) + ",\n";
    j += "      \"beta\": " + json_rational(s.record.beta) + ",\n";
    j += "      \"poly_coeffs\": [";
    for (size_t c = 0; c < s.coeffs.size(); ++c) {
      j += fmt(s.coeffs[c]);
      if (c + 1 < s.coeffs.size()) j += ", ";
    }
    j += "],\n";
    j += "      \"eigenfunction\": " + json_escape(eigenfunction_descriptor(s.record)) + ",\n";
    j += "      \"period_class\": \"" + std::string(period_str(s.record.period_class)) + "\",\n";
    j += "      \"degeneracy_group\": " +
         (doc.degeneracy_group[i] < 0 ? std::string("null")
                                      : std::to_string(doc.degeneracy_group[i])) +
         "\n";
    j += i + 1 < doc.solutions.size() ? "    },\n" : "    }\n";
  }
  j += "  ]";

  if (doc.verification) {
    const CrosscheckReport& r = *doc.verification;
    j += ",\n  \"verification\": {\n";
    j += "    \"steps\": " + std::to_string(doc.verify_steps) + ",\n";
    j += "    \"all_passed\": " + bool_str(r.all_passed) + ",\n";
    j += "    \"entries\": [\n";
    for (size_t i = 0; i < r.entries.size(); ++i) {
      const CrosscheckEntry& e = r.entries[i];
      j += "      {\n";
      j += "        \"energy\": " + fmt(e.energy) + ",\n";
      j += "        \"delta\": " + fmt(e.delta) + ",\n";
      j += "        \"discriminant_defect\": " + fmt(e.discriminant_defect) + ",\n";
      j += "        \"discriminant_ok\": " + bool_str(e.discriminant_ok) + ",\n";
      j += "        \"nearest_edge\": " + fmt(e.nearest_edge) + ",\n";
      j += "        \"edge_distance\": " + fmt(e.edge_distance) + ",\n";
      j += "        \"edge_ok\": " + bool_str(e.edge_ok) + ",\n";
      j += "        \"tangential\": " + bool_str(e.tangential) + ",\n";
      j += "        \"period_ok\": " + bool_str(e.period_ok) + ",\n";
      j += "        \"passed\": " + bool_str(e.passed) + "\n";
      j += i + 1 < r.entries.size() ? "      },\n" : "      }\n";
    }
    j += "    ],\n";
    j += "    \"warnings\": [";
    for (size_t i = 0; i < r.warnings.size(); ++i) {
      j += json_escape(r.warnings[i]);
      if (i + 1 < r.warnings.size()) j += ", ";
    }
    j += "]\n";
    j += "  }";
  }
  j += "\n}\n";
  return j;
}

std::string render_text(const SolutionDocument& doc) {
  const PotentialParams& p = doc.params;
  std::string out = "associated Lame potential\n";
  out += "  a = " + p.a.str() + "  b = " + p.b.str() + "  m = " + fmt(p.m.value()) +
         "  shift = " + fmt(p.shift) + "\n";
  out += "  V(x) = " + (p.a * (p.a + 1)).str() + " m sn^2(x) + " + (p.b * (p.b + 1)).str() +
         " m cn^2(x)/dn^2(x) + shift\n\n";

  out += "residue sets\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"  set", "b1", "d1", "n", "LI", "parity", "period"});
  for (const SetEvaluation& ev : doc.records) {
    if (ev.admissible) {
      rows.push_back({"  " + std::to_string(ev.set.set_id), ev.set.b1.str(), ev.set.d1.str(),
                      ev.n_exact.str(), std::to_string(ev.record.li_count),
                      parity_str(ev.record.poly_parity), period_str(ev.record.period_class)});
    } else {
      rows.push_back({"  " + std::to_string(ev.set.set_id), ev.set.b1.str(), ev.set.d1.str(),
                      ev.n_exact.str(), "-", "-", "-"});
    }
  }
  out += format_columns(rows);

  out += "\nband edges (" + std::to_string(doc.solutions.size()) + ")\n";
  rows.clear();
  rows.push_back({"  energy", "energy - shift", "set", "eigenfunction", "period", "degeneracy"});
  for (size_t i = 0; i < doc.solutions.size(); ++i) {
    const BandEdgeSolution& s = doc.solutions[i];
    rows.push_back({"  " + fmt(s.energy), fmt(s.energy_unshifted),
                    std::to_string(s.record.residue_set.set_id),
                    eigenfunction_descriptor(s.record), period_str(s.record.period_class),
                    doc.degeneracy_group[i] < 0 ? "-" : std::to_string(doc.degeneracy_group[i])});
  }
  out += format_columns(rows);

  if (doc.verification) {
    const CrosscheckReport& r = *doc.verification;
    out += "\ncrosscheck (steps = " + std::to_string(doc.verify_steps) + ")\n";
    rows.clear();
    rows.push_back({"  energy", "delta", "|delta|-2", "edge distance", "tangential", "period",
                    "result"});
    for (const CrosscheckEntry& e : r.entries) {
      rows.push_back({"  " + fmt(e.energy), fmt(e.delta), fmt(e.discriminant_defect),
                      fmt(e.edge_distance), e.tangential ? "yes" : "no",
                      e.period_ok ? "ok" : "MISMATCH", e.passed ? "pass" : "FAIL"});
    }
    out += format_columns(rows);
    for (const std::string& w : r.warnings) out += "warning: " + w + "\n";
    size_t passed = 0;
    for (const CrosscheckEntry& e : r.entries) passed += e.passed ? 1 : 0;
    out += std::string("result: ") + (r.all_passed ? "PASS" : "FAIL") + " (" +
           std::to_string(passed) + "/" + std::to_string(r.entries.size()) + " energies)\n";
  }
  return out;
}

namespace {

struct TableRow {
  const char* psi;
  const char* label;
};

struct TableSet {
  int set_id;
  std::vector<TableRow> rows;
};

// Published band-edge tables for the two worked potentials, in ascending
// energy order within each set (the order the pencil solver emits).
const std::vector<TableSet>& table_rows(int which) {
  static const std::vector<TableSet> integer_case = {
      {1, {}},
      {2,
       {{"cn(x) dn(x)^{-1} (3m sn^2(x) - 2 - sqrt(4-3m))", "5 - 3m - 2 sqrt(4-3m)"},
        {"cn(x) dn(x)^{-1} (3m sn^2(x) - 2 + sqrt(4-3m))", "5 - 3m + 2 sqrt(4-3m)"}}},
      {3, {{"dn(x)^{2}", "0"}}},
      {4,
       {{"sn(x) dn(x)^{-1} (3m sn^2(x) - 2 - m - sqrt(m^2-5m+4))", "5 - 2m - 2 sqrt(m^2-5m+4)"},
        {"sn(x) dn(x)^{-1} (3m sn^2(x) - 2 - m + sqrt(m^2-5m+4))",
         "5 - 2m + 2 sqrt(m^2-5m+4)"}}}};
  static const std::vector<TableSet> half_integer_case = {
      {1, {{"cn(x) dn(x)^{3/2} sn(x)", "delta9 - m + 2"}}},
      {2,
       {{"cn(x) dn(x)^{3/2} sn(x)", "delta9 - m + 2"},
        {"cn(x) dn(x)^{-1/2} sn(x) (1 - 2 sn^2(x))", "14 - 7m + delta9"}}},
      {3,
       {{"dn(x)^{3/2} (12m sn^2(x) - 5m - 2 - delta9)", "0"},
        {"dn(x)^{3/2} (12m sn^2(x) - 5m - 2 + delta9)", "2 delta9"}}},
      {4,
       {{"dn(x)^{3/2} (12m sn^2(x) - 5m - 2 - delta9)", "0"},
        {"dn(x)^{3/2} (12m sn^2(x) - 5m - 2 + delta9)", "2 delta9"},
        {"dn(x)^{-1/2} (1 - 8 sn^2(x) cn^2(x))", "14 - 7m + delta9"}}}};
  return which == 4 ? integer_case : half_integer_case;
}

}  // namespace

std::string render_table(int which, double m, bool as_json) {
  if (which != 4 && which != 5)
    throw std::invalid_argument("no such table: " + std::to_string(which) +
                                " (supported: 4, 5)");
  const Rational a = which == 4 ? Rational(2) : Rational(7, 2);
  const Rational b = which == 4 ? Rational(1) : Rational(1, 2);
  const double shift = *paper_shift(a, b, m);
  const PotentialParams p(a, b, ModulusParam(m), shift);

  // Pre-dedupe energies per set, ascending, to pair with the fixed rows.
  const std::vector<SetEvaluation> evs = evaluate_sets(p);
  std::vector<std::vector<double>> energies(evs.size());
  for (size_t i = 0; i < evs.size(); ++i) {
    if (!evs[i].admissible) continue;
    const std::vector<BandEdgeSolution> sols =
        solve_pencil(build_pencil(evs[i].record, p), p, evs[i].record);
    for (const BandEdgeSolution& s : sols) energies[i].push_back(s.energy);
  }
  const std::vector<TableSet>& sets = table_rows(which);
  for (size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].rows.size() != energies[i].size())
      throw std::logic_error("published table row count does not match solver output");
  }

  if (as_json) {
    std::string j = "{\n";
    j += "  \"table\": " + std::to_string(which) + ",\n";
    j += "  \"a\": " + json_escape(a.str()) + ",\n";
    j += "  \"b\": " + json_escape(b.str()) + ",\n";
    j += "  \"m\": " + fmt(m) + ",\n";
    j += "  \"shift\": " + fmt(shift) + ",\n";
    if (which == 5)
      j += "  \"delta9\": " + fmt(std::sqrt(4.0 - 4.0 * m + 25.0 * m * m)) + ",\n";
    j += "  \"sets\": [\n";
    for (size_t i = 0; i < sets.size(); ++i) {
      const SetEvaluation& ev = evs[i];
      j += "    {\n";
      j += "      \"set_id\": " + std::to_string(ev.set.set_id) + ",\n";
      j += "      \"b1\": " + json_rational(ev.set.b1) + ",\n";
      j += "      \"d1\": " + json_rational(ev.set.d1) + ",\n";
      j += "      \"n\": " + json_rational(ev.n_exact) + ",\n";
      j += "      \"admissible\": " + bool_str(ev.admissible) + ",\n";
      j += "      \"li_count\": " +
           (ev.admissible ? std::to_string(ev.record.li_count) : std::string("null")) + ",\n";
      j += "      \"rows\": [";
      for (size_t r = 0; r < sets[i].rows.size(); ++r) {
        j += "\n        {\n";
        j += "          \"eigenfunction\": " + json_escape(sets[i].rows[r].psi) + ",\n";
        j += "          \"energy_label\": " + json_escape(sets[i].rows[r].label) + ",\n";
        j += "          \"energy\": " + fmt(energies[i][r]) + "\n";
        j += r + 1 < sets[i].rows.size() ? "        }," : "        }\n      ";
      }
      j += "]\n";
      j += i + 1 < sets.size() ? "    },\n" : "    }\n";
    }
    j += "  ]\n}\n";
    return j;
  }

  std::string out = "band edge solutions, a = " + a.str() + ", b = " + b.str() +
                    ", m = " + fmt(m) + ", shift = " + fmt(shift) + "\n";
  out += "  V(x) = " + (a * (a + 1)).str() + " m sn^2(x) + " + (b * (b + 1)).str() +
         " m cn^2(x)/dn^2(x) + shift\n";
  if (which == 5)
    out += "  delta9 = sqrt(4 - 4m + 25 m^2) = " + fmt(std::sqrt(4.0 - 4.0 * m + 25.0 * m * m)) +
           "\n";
  out += "\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"  set", "b1", "d1", "n", "LI", "eigenfunction", "energy", "value"});
  for (size_t i = 0; i < sets.size(); ++i) {
    const SetEvaluation& ev = evs[i];
    const std::string id = "  " + std::to_string(ev.set.set_id);
    if (!ev.admissible) {
      rows.push_back({id, ev.set.b1.str(), ev.set.d1.str(), ev.n_exact.str(), "-", "-", "-",
                      "-"});
      continue;
    }
    for (size_t r = 0; r < sets[i].rows.size(); ++r) {
      rows.push_back({r == 0 ? id : "  ", r == 0 ? ev.set.b1.str() : "",
                      r == 0 ? ev.set.d1.str() : "", r == 0 ? ev.n_exact.str() : "",
                      r == 0 ? std::to_string(ev.record.li_count) : "", sets[i].rows[r].psi,
                      sets[i].rows[r].label, fmt(energies[i][r])});
    }
  }
  out += format_columns(rows);
  return out;
}

}  // namespace alqes::cli

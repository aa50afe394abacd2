#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "document.hpp"

namespace {

using namespace alqes;

struct ParamFlags {
  std::string a;
  std::string b;
  double m = 0.0;
  std::string shift = "0";
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--a", f.a, "parameter a, a rational such as 2 or 7/2")->required();
  cmd->add_option("--b", f.b, "parameter b, a rational such as 1 or 1/2")->required();
  cmd->add_option("--m", f.m, "elliptic parameter m in [0, 1)")->required();
  cmd->add_option("--shift", f.shift,
                  "additive energy shift: a real number, or 'paper' for the published "
                  "convention of the two worked cases");
}

// Throws std::invalid_argument (or a subclass) on every rejected input.
PotentialParams resolve_params(const ParamFlags& f) {
  const std::optional<Rational> a = Rational::parse(f.a);
  if (!a)
    throw std::invalid_argument("--a must be a rational such as 2 or 7/2 (decimals rejected)");
  const std::optional<Rational> b = Rational::parse(f.b);
  if (!b)
    throw std::invalid_argument("--b must be a rational such as 1 or 1/2 (decimals rejected)");
  double shift = 0.0;
  if (f.shift == "paper") {
    const std::optional<double> s = cli::paper_shift(*a, *b, f.m);
    if (!s)
      throw std::invalid_argument(
          "--shift paper is only published for (a, b) = (2, 1) and (7/2, 1/2); "
          "pass an explicit number instead");
    shift = *s;
  } else {
    char* end = nullptr;
    shift = std::strtod(f.shift.c_str(), &end);
    if (end == f.shift.c_str() || *end != '\0')
      throw std::invalid_argument("--shift must be a real number or the literal 'paper'");
  }
  return PotentialParams(*a, *b, ModulusParam(f.m), shift);
}

int run_solve(const ParamFlags& f, const std::string& format) {
  const cli::SolutionDocument doc = cli::make_document(resolve_params(f));
  const std::string out = format == "json" ? cli::render_json(doc) : cli::render_text(doc);
  std::fputs(out.c_str(), stdout);
  return 0;
}

int run_verify(const ParamFlags& f, int steps, const std::string& format) {
  const PotentialParams p = resolve_params(f);
  cli::SolutionDocument doc = cli::make_document(p);
  doc.verification = crosscheck(doc.solutions, p, steps);
  doc.verify_steps = steps;
  const std::string out = format == "json" ? cli::render_json(doc) : cli::render_text(doc);
  std::fputs(out.c_str(), stdout);
  return doc.verification->all_passed ? 0 : 1;
}

int run_bands(const ParamFlags& f, double e_min, double e_max, int samples, int steps,
              const std::string& out_path) {
  const PotentialParams p = resolve_params(f);
  const std::vector<DiscriminantSample> trace =
      discriminant_trace(p, e_min, e_max, samples, steps);
  std::string csv = "energy,delta\n";
  char buf[80];
  for (const DiscriminantSample& s : trace) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", s.energy, s.delta);
    csv += buf;
  }
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
    return 0;
  }
  std::ofstream ofs(out_path, std::ios::binary);  // binary keeps LF endings everywhere
  ofs << csv;
  ofs.flush();
  if (!ofs) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return 2;
  }
  return 0;
}

int run_tables(int which, double m, const std::string& format) {
  const std::string out = cli::render_table(which, m, format == "json");
  std::fputs(out.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"band-edge solver for the associated Lame potential"};
  app.require_subcommand(1);

  ParamFlags flags;
  std::string solve_format = "json";
  std::string verify_format = "text";
  std::string tables_format = "text";

  CLI::App* solve = app.add_subcommand(
      "solve", "compute the quasi-exact band-edge spectrum and eigenfunctions");
  add_param_flags(solve, flags);
  solve->add_option("--format", solve_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  int steps = 20000;
  CLI::App* verify = app.add_subcommand(
      "verify", "solve, then cross-check every energy against the Floquet oracle");
  add_param_flags(verify, flags);
  verify->add_option("--steps", steps, "RK4 steps per monodromy integration");
  verify->add_option("--format", verify_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  double e_min = 0.0, e_max = 0.0;
  int samples = 1000;
  std::string out_path;
  CLI::App* bands = app.add_subcommand(
      "bands", "trace the Floquet discriminant over an energy window as CSV");
  add_param_flags(bands, flags);
  bands->add_option("--emin", e_min, "window start")->required();
  bands->add_option("--emax", e_max, "window end")->required();
  bands->add_option("--samples", samples, "number of energy samples");
  bands->add_option("--steps", steps, "RK4 steps per monodromy integration");
  bands->add_option("--out", out_path, "output file (standard output when omitted)");

  int which = 0;
  double table_m = 0.0;
  CLI::App* tables = app.add_subcommand(
      "tables", "reproduce a published band-edge table for a worked case");
  tables->add_option("--which", which, "4 (a=2, b=1) or 5 (a=7/2, b=1/2)")->required();
  tables->add_option("--m", table_m, "elliptic parameter m in [0, 1)")->required();
  tables->add_option("--format", tables_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_solve(flags, solve_format);
    if (verify->parsed()) return run_verify(flags, steps, verify_format);
    if (bands->parsed()) return run_bands(flags, e_min, e_max, samples, steps, out_path);
    return run_tables(which, table_m, tables_format);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

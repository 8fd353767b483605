#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopbank/cascade.hpp"
#include "loopbank/common.hpp"
#include "loopbank/cuntz.hpp"
#include "loopbank/filters.hpp"
#include "loopbank/loop.hpp"
#include "loopbank/serialize.hpp"

namespace {

using loopbank::cx;
using loopbank::Error;
using loopbank::InternalError;
using loopbank::PreconditionError;
using loopbank::ValidationError;
namespace cascade = loopbank::cascade;
namespace cuntz = loopbank::cuntz;
namespace filters = loopbank::filters;
namespace lp = loopbank::loop;
namespace serialize = loopbank::serialize;
using serialize::json;

std::string read_all(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("io", "cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("io", "cannot open output file: " + path);
  f << text;
  if (!f) throw ValidationError("io", "failed writing output file: " + path);
}

// Tolerance precedence: --tol flag, then LOOPBANK_TOL, then fallback.
double resolve_tol(const CLI::Option* opt, double flag_value, double fallback) {
  if (opt != nullptr && opt->count() > 0) {
    if (!(flag_value > 0.0))
      throw ValidationError("tol", "--tol must be a positive number");
    return flag_value;
  }
  if (const char* env = std::getenv("LOOPBANK_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw ValidationError("tol", "LOOPBANK_TOL must be a positive number");
    return v;
  }
  return fallback;
}

struct CommonOpts {
  std::string input = "-";
  std::string out = "-";
  double tol = loopbank::kCertTol;
  bool no_verify = false;
  CLI::Option* tol_opt = nullptr;
};

CLI::App* add_common(CLI::App& app, const std::string& name,
                     const std::string& help, CommonOpts& o,
                     bool with_verify = true) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("input", o.input, "input document path, or - for stdin");
  sub->add_option("-o,--out", o.out, "output path, or - for stdout");
  o.tol_opt = sub->add_option("--tol", o.tol,
                              "certification tolerance (also LOOPBANK_TOL)");
  if (with_verify)
    sub->add_flag("--no-verify", o.no_verify,
                  "skip load-time unitarity diagnostics (never schema checks)");
  return sub;
}

json load_doc(const std::string& path) { return serialize::parse(read_all(path)); }

void run_transform(const CommonOpts& o) {
  const double tol = resolve_tol(o.tol_opt, o.tol, loopbank::kCertTol);
  const json doc = load_doc(o.input);
  json out;
  switch (serialize::detect_kind(doc)) {
    case serialize::DocKind::loop: {
      const lp::PolyLoop a = serialize::loop_from_json(doc, tol, !o.no_verify);
      out = serialize::to_json(filters::loop_to_filters(a));
      break;
    }
    case serialize::DocKind::bank: {
      const filters::FilterBank b =
          serialize::bank_from_json(doc, tol, !o.no_verify);
      out = serialize::to_json(filters::filters_to_loop(b, tol));
      break;
    }
    default:
      throw ValidationError("schema",
                            "transform expects a loop or filter bank document");
  }
  write_out(o.out, serialize::dump(out));
}

void run_complete(const CommonOpts& o, int n_flag) {
  const double tol = resolve_tol(o.tol_opt, o.tol, loopbank::kCertTol);
  const json doc = load_doc(o.input);
  if (serialize::detect_kind(doc) != serialize::DocKind::lowpass)
    throw ValidationError("schema", "complete expects a low-pass document");
  int n_doc = -1;
  filters::LowPassCandidate c;
  c.m0 = serialize::lowpass_from_json(doc, &n_doc);
  c.n = n_flag > 0 ? n_flag : n_doc;
  if (c.n < 2)
    throw ValidationError("schema",
                          "band count missing: provide --n or an \"n\" field >= 2");
  const filters::FilterBank bank = filters::complete_lowpass(c, tol);
  write_out(o.out, serialize::dump(serialize::to_json(bank)));
}

void run_factorize(const CommonOpts& o) {
  const double tol = resolve_tol(o.tol_opt, o.tol, loopbank::kCertTol);
  const lp::PolyLoop a = serialize::loop_from_json(load_doc(o.input), tol, true);
  write_out(o.out, serialize::dump(serialize::to_json(lp::factorize(a, tol))));
}

void run_degree(const CommonOpts& o) {
  const double tol = resolve_tol(o.tol_opt, o.tol, loopbank::kCertTol);
  const lp::PolyLoop a = serialize::loop_from_json(load_doc(o.input), tol, true);
  write_out(o.out, std::to_string(lp::mcmillan_degree(a, tol)) + "\n");
}

void run_analyze(const CommonOpts& o, const std::string& against) {
  const double tol = resolve_tol(o.tol_opt, o.tol, loopbank::kCertTol);
  const lp::PolyLoop a = serialize::loop_from_json(load_doc(o.input), tol, true);
  json out = serialize::to_json(cuntz::analyze(a));
  if (!against.empty()) {
    const lp::PolyLoop b = serialize::loop_from_json(load_doc(against), tol, true);
    out["intertwiners"] = serialize::to_json(cuntz::intertwiner_space(a, b));
  }
  write_out(o.out, serialize::dump(out));
}

void run_cascade(const CommonOpts& o, int iterations, const std::string& csv,
                 const CLI::Option* ortho_opt, double ortho_tol) {
  // The low-pass precondition is checked at 1e-8 unless a tolerance is given.
  const double tol = resolve_tol(o.tol_opt, o.tol, 1e-8);
  const filters::FilterBank bank =
      serialize::bank_from_json(load_doc(o.input), tol, !o.no_verify);
  const cascade::SampledFunction phi = cascade::cascade_scaling(bank, iterations, tol);
  const std::vector<cascade::SampledFunction> psis =
      cascade::cascade_wavelets(bank, iterations, tol);

  json support{{"phi", serialize::to_json(cascade::support_report(phi))}};
  json psi_support = json::array();
  for (const cascade::SampledFunction& p : psis)
    psi_support.push_back(serialize::to_json(cascade::support_report(p)));
  support["psi"] = std::move(psi_support);

  const auto gram_json = [](const std::vector<cx>& g) {
    json arr = json::array();
    for (const cx& v : g) arr.push_back(json::array({v.real(), v.imag()}));
    return arr;
  };
  double worst = 0.0;
  const auto gram_defect = [&worst](const std::vector<cx>& g) {
    const std::size_t mid = g.size() / 2;
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst,
                       std::abs(g[i] - (i == mid ? cx(1.0, 0.0) : cx(0.0, 0.0))));
  };
  const std::vector<cx> phi_gram = cascade::orthonormality_diagnostic(phi);
  gram_defect(phi_gram);
  json ortho{{"phi", gram_json(phi_gram)}};
  json psi_gram = json::array();
  for (const cascade::SampledFunction& p : psis) {
    const std::vector<cx> g = cascade::orthonormality_diagnostic(p);
    gram_defect(g);
    psi_gram.push_back(gram_json(g));
  }
  ortho["psi"] = std::move(psi_gram);
  ortho["max_defect"] = worst;
  if (ortho_opt != nullptr && ortho_opt->count() > 0)
    ortho["pass"] = worst <= ortho_tol;

  json out{{"schema_version", "1"},
           {"n", bank.n},
           {"genus", bank.genus()},
           {"levels", iterations},
           {"support", std::move(support)},
           {"orthonormality", std::move(ortho)}};
  if (!csv.empty()) write_out(csv, serialize::family_csv(phi, psis));
  write_out(o.out, serialize::dump(out));
}

int fail(const Error& e, int code) {
  const json err{{"error", {{"kind", e.kind}, {"message", e.what()}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paraunitary filter banks, polynomial loops, and their corner representations"};
  app.require_subcommand(1);

  CommonOpts transform_o, complete_o, factorize_o, degree_o, analyze_o, cascade_o;
  int complete_n = -1;
  std::string against;
  int iterations = 10;
  std::string csv_path;
  double ortho_tol = 1e-3;

  add_common(app, "transform",
             "convert a loop document to its filter bank, or back", transform_o);
  CLI::App* complete_cmd = add_common(
      app, "complete", "complete a low-pass filter to a full bank", complete_o,
      /*with_verify=*/false);
  complete_cmd->add_option("--n", complete_n, "number of bands");
  add_common(app, "factorize",
             "decompose a loop into rank-one elementary factors", factorize_o,
             /*with_verify=*/false);
  add_common(app, "degree", "print the McMillan degree of a loop", degree_o,
             /*with_verify=*/false);
  CLI::App* analyze_cmd =
      add_common(app, "analyze-rep",
                 "spectral and decomposition report for the corner representation",
                 analyze_o, /*with_verify=*/false);
  analyze_cmd->add_option("--against", against,
                          "second loop document; adds an intertwiner report");
  CLI::App* cascade_cmd = add_common(
      app, "cascade", "sample scaling and wavelet functions by cascade iteration",
      cascade_o);
  cascade_cmd->add_option("--iterations", iterations, "refinement levels (default 10)");
  cascade_cmd->add_option("--csv", csv_path, "write samples as CSV to this path");
  CLI::Option* ortho_opt = cascade_cmd->add_option(
      "--ortho-tol", ortho_tol,
      "report pass/fail of the shift orthonormality diagnostic at this tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const json err{{"error", {{"kind", "usage"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand("transform")) run_transform(transform_o);
    else if (app.got_subcommand("complete")) run_complete(complete_o, complete_n);
    else if (app.got_subcommand("factorize")) run_factorize(factorize_o);
    else if (app.got_subcommand("degree")) run_degree(degree_o);
    else if (app.got_subcommand("analyze-rep")) run_analyze(analyze_o, against);
    else if (app.got_subcommand("cascade"))
      run_cascade(cascade_o, iterations, csv_path, ortho_opt, ortho_tol);
  } catch (const ValidationError& e) {
    return fail(e, 2);
  } catch (const PreconditionError& e) {
    return fail(e, 3);
  } catch (const InternalError& e) {
    return fail(e, 4);
  } catch (const Error& e) {
    return fail(e, 4);
  } catch (const std::exception& e) {
    const json err{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 4;
  }
  return 0;
}

// gaborlab: build atoms, check painless frames, compute norms, profile
// divergence, probe series and run the acceptance suite.
//
// Exit codes: 0 success, 2 validation, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaborlab/acceptance.hpp"
#include "gaborlab/errors.hpp"
#include "gaborlab/gabor.hpp"
#include "gaborlab/modnorm.hpp"
#include "gaborlab/probes.hpp"
#include "gaborlab/serialize.hpp"
#include "gaborlab/srlab.hpp"

namespace fs = std::filesystem;
using namespace gaborlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Params {
  std::string out = ".";
  std::uint64_t seed = 0;

  std::string kind;
  std::string atom;
  std::string h;
  std::string window;
  std::string method = "box";
  std::string filter;
  double a = 0.0, b = 1.0;
  double alpha = 1.0, beta = 1.0;
  double p = 2.0, q = 2.0;
  double sigma = 1.0;
  double epsilon = 0.5;
  double delta = 0.0;
  double level = 1.0;
  int n = 1;
  int L = 1;
  int blocks = 8;
  int cells = 4;
  long kmin = 0, kmax = -1, nmin = 0, nmax = -1;
  std::size_t resolution = gabor::kDefaultResolution;
  std::size_t trials = 64;
};

// Flat key = value file. Lines starting with # are comments.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::validation, "cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::validation, path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Appends config entries as flags unless the same flag is on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const std::string path = *(it + 1);
  const auto entries = read_config(path);
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

class Manifest {
 public:
  Manifest(std::string command, const Params& p) : command_(std::move(command)), params_(p) {}

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  void set(const std::string& key, double value) {
    std::ostringstream os;
    os << std::setprecision(17) << value;
    entries_[key] = os.str();
  }
  void output(const fs::path& path) { outputs_.push_back(path.filename().string()); }

  void write() const {
    std::ofstream f(fs::path(params_.out) / "manifest.txt");
    f << "command = " << command_ << '\n';
    f << "version = " << kVersion << '\n';
    f << "atom_format = " << kAtomFormatName << ' ' << kAtomFormatVersion << '\n';
    f << "seed = " << params_.seed << '\n';
    for (const auto& [k, v] : entries_) f << k << " = " << v << '\n';
    for (const auto& o : outputs_) f << "output = " << o << '\n';
  }

 private:
  std::string command_;
  const Params& params_;
  std::map<std::string, std::string> entries_;
  std::vector<std::string> outputs_;
};

fs::path out_path(const Params& p, const std::string& name) {
  fs::create_directories(p.out);
  return fs::path(p.out) / name;
}

PiecewiseAtom require_atom(const std::string& path, const char* flag) {
  if (path.empty()) throw Error(ErrorCode::validation, std::string(flag) + " is required");
  return load_atom(path);
}

int cmd_build(const Params& p) {
  Manifest m("build", p);
  m.set("kind", p.kind);
  PiecewiseAtom atom;
  if (p.kind == "box") {
    if (!(p.a < p.b)) throw Error(ErrorCode::validation, "box needs a < b");
    atom = PiecewiseAtom::box(p.a, p.b);
    m.set("a", p.a);
    m.set("b", p.b);
  } else if (p.kind == "triangle") {
    atom = gabor::triangle_atom();
  } else if (p.kind == "sr-block") {
    atom = srlab::block_poly(p.n);
    m.set("n", p.n);
  } else if (p.kind == "gp") {
    atom = srlab::gp_atom(p.p, p.blocks);
    m.set("p", p.p);
    m.set("blocks", p.blocks);
  } else if (p.kind == "h") {
    const double b = p.a + 1.0 / p.L;
    const auto h = srlab::h_atom(p.p, p.q, p.a, b, p.L, p.epsilon, p.blocks);
    atom = h.atom;
    m.set("p", p.p);
    m.set("q", p.q);
    m.set("a", p.a);
    m.set("L", p.L);
    m.set("epsilon", p.epsilon);
    m.set("blocks", p.blocks);
    m.set("M", h.M);
    m.set("sup_bound", h.sup_bound);
    m.set("q_norm_bound", h.q_norm_bound);
    std::cout << "M=" << h.M << " sup_bound=" << h.sup_bound << " q_norm_bound=" << h.q_norm_bound
              << '\n';
  } else if (p.kind == "counterexample") {
    atom = srlab::counterexample_atom(p.q, p.cells, p.blocks).atom;
    m.set("q", p.q);
    m.set("cells", p.cells);
    m.set("blocks", p.blocks);
  } else if (p.kind == "parseval") {
    PiecewiseAtom h = require_atom(p.h, "--inner");
    if (p.level != 1.0) h = h.scaled(p.level);
    atom = srlab::parseval_atom(p.beta, h, p.delta);
    m.set("beta", p.beta);
    m.set("h", p.h);
    m.set("level", p.level);
    m.set("delta", p.delta);
  } else if (p.kind == "gaussian") {
    atom = gaussian_piece(p.sigma);
    m.set("sigma", p.sigma);
  } else {
    throw Error(ErrorCode::validation, "unknown atom kind '" + p.kind + "'");
  }
  const auto path = out_path(p, "atom.json");
  save_atom(path, atom);
  m.output(path);
  m.write();
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_frame_check(const Params& p) {
  const gabor::GaborSystem sys(require_atom(p.atom, "--atom"), p.alpha, p.beta);
  const auto fc = gabor::painless_check(sys, p.resolution);
  std::cout << "A=" << fc.A << " B=" << fc.B << " frame=" << (fc.is_frame ? "true" : "false")
            << '\n';

  Manifest m("frame-check", p);
  m.set("atom", p.atom);
  m.set("alpha", p.alpha);
  m.set("beta", p.beta);
  m.set("A", fc.A);
  m.set("B", fc.B);
  const std::size_t count = 1024;
  const auto D = gabor::periodization(sys, SampleGrid(0.0, p.alpha / count, count));
  const auto path = out_path(p, "periodization.csv");
  std::ofstream f(path);
  f << std::setprecision(17) << "x,periodization\n";
  for (std::size_t j = 0; j < D.size(); ++j) f << D.x(j) << ',' << D[j].real() << '\n';
  m.output(path);
  m.write();
  return 0;
}

int cmd_norm(const Params& p) {
  const PiecewiseAtom f = require_atom(p.atom, "--atom");
  Manifest m("norm", p);
  m.set("atom", p.atom);
  m.set("method", p.method);
  m.set("p", p.p);
  double value = 0.0;
  std::string window;
  double q = p.p;

  if (p.method == "box") {
    const IndexRange ks = p.kmax >= p.kmin ? IndexRange{p.kmin, p.kmax}
                                           : modnorm::spectral_cells(f, p.beta);
    const IndexRange ns = p.nmax >= p.nmin ? IndexRange{p.nmin, p.nmax}
                                           : modnorm::support_cells(f, p.alpha);
    value = modnorm::box_equiv_norm(f, p.p, p.alpha, p.beta, ks, ns);
    std::ostringstream w;
    w << "alpha=" << p.alpha << " beta=" << p.beta << " k=" << ks.first << ".." << ks.last
      << " n=" << ns.first << ".." << ns.last;
    window = w.str();
    m.set("alpha", p.alpha);
    m.set("beta", p.beta);
  } else if (p.method == "stft") {
    q = p.q;
    const modnorm::GaussianWindow win(p.sigma);
    const Interval s = f.empty() ? Interval{0.0, 0.0} : f.support();
    const IndexRange fr = modnorm::spectral_cells(f, 1.0);
    const double xs = p.sigma / 8.0;
    const double x0 = s.a - win.half_width(), x1 = s.b + win.half_width();
    const double ws = 1.0 / (16.0 * p.sigma);
    const double w0 = static_cast<double>(fr.first) - 3.0 / p.sigma;
    const double w1 = static_cast<double>(fr.last) + 3.0 / p.sigma;
    const SampleGrid xg(x0, xs, static_cast<std::size_t>(std::ceil((x1 - x0) / xs)) + 1);
    const SampleGrid wg(w0, ws, static_cast<std::size_t>(std::ceil((w1 - w0) / ws)) + 1);
    const auto est = modnorm::mpq_norm_stft(f, p.p, q, win, xg, wg);
    value = est.value;
    if (est.truncated) {
      std::cerr << "warning: DomainTruncationWarning: boundary ratio " << est.boundary_ratio
                << " >= " << modnorm::kBoundaryTolerance << '\n';
    }
    window = "gaussian sigma=" + std::to_string(p.sigma);
    m.set("q", q);
    m.set("sigma", p.sigma);
    m.set("boundary_ratio", est.boundary_ratio);
  } else {
    throw Error(ErrorCode::validation, "unknown norm method '" + p.method + "'");
  }

  std::cout << std::setprecision(15) << value << '\n';
  m.set("value", value);
  const auto path = out_path(p, "norm.csv");
  std::ofstream csv(path);
  modnorm::write_norm_csv(csv, {{fs::path(p.atom).stem().string(), p.method, p.p, q, window, value}});
  m.output(path);
  m.write();
  return 0;
}

int cmd_diverge(const Params& p) {
  const PiecewiseAtom f = require_atom(p.atom, "--atom");
  const auto prof = srlab::divergence_profile(f, p.p, p.q, p.L, p.blocks);
  const auto path = out_path(p, "profile.csv");
  std::ofstream csv(path);
  srlab::write_profile_csv(csv, prof);
  std::cout << "block " << prof.block.back() << ": partial_sum_p=" << prof.partial_sum_p.back()
            << " partial_sum_q_power=" << prof.partial_sum_q_power.back()
            << " tail_bound_q=" << prof.tail_bound_q.back() << '\n';
  Manifest m("diverge", p);
  m.set("atom", p.atom);
  m.set("p", p.p);
  m.set("q", p.q);
  m.set("L", p.L);
  m.set("blocks", p.blocks);
  m.output(path);
  m.write();
  return 0;
}

// Unconditional-convergence probe of the finite Gabor expansion of an atom:
// terms c_kn M_{beta n} T_{alpha k} g with coefficients from the canonical dual.
int cmd_probe(const Params& p) {
  const PiecewiseAtom f = require_atom(p.atom, "--atom");
  const PiecewiseAtom g = p.window.empty() ? PiecewiseAtom::box(0.0, 1.0) : load_atom(p.window);
  const gabor::GaborSystem sys(g, p.alpha, p.beta);
  const auto dual = gabor::canonical_dual(sys);
  const Interval s = f.support();
  const IndexRange ks = gabor::covering_translations(sys, s);
  const long nm = p.nmax >= 0 ? p.nmax : 16;
  const IndexRange ns{-nm, nm};
  const auto coeffs = gabor::analysis(gabor::GaborSystem(dual.as_atom(), p.alpha, p.beta), f, ks, ns);

  const double step = 1.0 / 256.0;
  const SampleGrid grid(s.a, step, static_cast<std::size_t>(std::ceil(s.length() / step)));
  std::vector<SampledSignal> terms;
  for (long k = ks.first; k <= ks.last; ++k) {
    for (long n = ns.first; n <= ns.last; ++n) {
      const cplx c = coeffs.at(k, n);
      if (c == cplx{}) continue;
      CoeffGrid one(IndexRange{k, k}, IndexRange{n, n});
      one.at(k, n) = c;
      terms.push_back(gabor::synthesis(sys, one, grid));
    }
  }
  if (terms.empty()) throw Error(ErrorCode::validation, "probe: expansion has no nonzero terms");
  probes::ProbeOptions opt;
  opt.trials = p.trials;
  opt.seed = p.seed;
  const auto report = probes::unconditional_probe(terms, probes::l2_norm, opt);
  std::cout << "terms=" << terms.size() << " natural_prefix_deviation="
            << report.natural_prefix_deviation << " max_deviation=" << report.max_deviation
            << " mean_deviation=" << report.mean_deviation << '\n';
  const auto path = out_path(p, "probe.csv");
  std::ofstream csv(path);
  probes::write_probe_csv(csv, report);
  Manifest m("probe", p);
  m.set("atom", p.atom);
  m.set("window", p.window.empty() ? "box" : p.window);
  m.set("alpha", p.alpha);
  m.set("beta", p.beta);
  m.set("nmax", static_cast<double>(nm));
  m.set("trials", static_cast<double>(p.trials));
  m.output(path);
  m.write();
  return 0;
}

int cmd_accept(const Params& p) {
  const auto results = acceptance::run(p.filter, &std::cout);
  if (results.empty()) throw Error(ErrorCode::validation, "no criteria match filter '" + p.filter + "'");
  const std::string summary = acceptance::summary_json(results);
  std::cout << summary << '\n';
  const auto path = out_path(p, "accept.json");
  std::ofstream(path) << summary << '\n';
  Manifest m("accept", p);
  m.set("filter", p.filter.empty() ? "all" : p.filter);
  m.output(path);
  m.write();
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Params p;
  CLI::App app{"Gabor frames, modulation norms and Shapiro-Rudin constructions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", p.out, "output directory")->capture_default_str();
    sub->add_option("--seed", p.seed, "global seed")->capture_default_str();
    sub->add_option("--config", config, "key = value file; flags override it");
  };

  auto* build = app.add_subcommand("build", "construct an atom and write atom.json");
  build->add_option("kind", p.kind, "box|triangle|sr-block|gp|h|counterexample|parseval|gaussian")
      ->required();
  build->add_option("--a", p.a, "left endpoint (box, h)");
  build->add_option("--b", p.b, "right endpoint (box)");
  build->add_option("--n", p.n, "block index (sr-block)");
  build->add_option("--p", p.p, "series exponent (gp, h)");
  build->add_option("--q", p.q, "target exponent (h, counterexample)");
  build->add_option("--L", p.L, "dilation (h)");
  build->add_option("--epsilon", p.epsilon, "q-norm budget (h)");
  build->add_option("--blocks", p.blocks, "truncation depth N");
  build->add_option("--cells", p.cells, "dyadic cells K (counterexample)");
  build->add_option("--beta", p.beta, "Parseval level (parseval)");
  build->add_option("--inner", p.h, "atom file on [0,1] (parseval)");
  build->add_option("--scale", p.level, "factor applied to h first (parseval)");
  build->add_option("--delta", p.delta, "lower bound for |h|^2 (parseval)");
  build->add_option("--sigma", p.sigma, "width (gaussian)");
  common(build);

  auto* frame = app.add_subcommand("frame-check", "painless frame bounds of (atom, alpha, beta)");
  frame->add_option("--atom", p.atom)->required();
  frame->add_option("--alpha", p.alpha)->capture_default_str();
  frame->add_option("--beta", p.beta)->capture_default_str();
  frame->add_option("--resolution", p.resolution)->capture_default_str();
  common(frame);

  auto* norm = app.add_subcommand("norm", "modulation norm of an atom");
  norm->add_option("--atom", p.atom)->required();
  norm->add_option("--method", p.method, "box|stft")->capture_default_str();
  norm->add_option("--p", p.p)->capture_default_str();
  norm->add_option("--q", p.q, "outer exponent (stft)")->capture_default_str();
  norm->add_option("--alpha", p.alpha)->capture_default_str();
  norm->add_option("--beta", p.beta)->capture_default_str();
  norm->add_option("--sigma", p.sigma, "window width (stft)")->capture_default_str();
  norm->add_option("--kmin", p.kmin);
  norm->add_option("--kmax", p.kmax);
  norm->add_option("--nmin", p.nmin);
  norm->add_option("--nmax", p.nmax);
  common(norm);

  auto* diverge = app.add_subcommand("diverge", "block-wise divergence profile");
  diverge->add_option("--atom", p.atom)->required();
  diverge->add_option("--p", p.p)->capture_default_str();
  diverge->add_option("--q", p.q)->capture_default_str();
  diverge->add_option("--L", p.L)->capture_default_str();
  diverge->add_option("--blocks", p.blocks)->capture_default_str();
  common(diverge);

  auto* probe = app.add_subcommand("probe", "permutation probe of a finite Gabor expansion");
  probe->add_option("--atom", p.atom)->required();
  probe->add_option("--window", p.window, "window atom file (default chi_[0,1))");
  probe->add_option("--alpha", p.alpha)->capture_default_str();
  probe->add_option("--beta", p.beta)->capture_default_str();
  probe->add_option("--nmax", p.nmax, "modulation window -nmax..nmax (default 16)");
  probe->add_option("--trials", p.trials)->capture_default_str();
  common(probe);

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--filter", p.filter, "module names or criterion numbers, comma-separated");
  common(accept);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }

  try {
    if (*build) return cmd_build(p);
    if (*frame) return cmd_frame_check(p);
    if (*norm) return cmd_norm(p);
    if (*diverge) return cmd_diverge(p);
    if (*probe) return cmd_probe(p);
    if (*accept) return cmd_accept(p);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "phm/basin_render.hpp"
#include "phm/cli_report.hpp"
#include "phm/degrees.hpp"
#include "phm/pentagon_geometry.hpp"

namespace phm {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned env_threads(unsigned fallback) {
  const char* v = std::getenv("PHM_THREADS");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n == 0 || n > 1024) throw UsageError(std::string("PHM_THREADS must be a positive integer, got ") + v);
  return static_cast<unsigned>(n);
}

std::string cplx(const std::complex<long double>& z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%+.12Lf %+.12Lfi", z.real(), z.imag());
  return buf;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string out;
  std::uint64_t seed = 42;
  std::vector<std::string> skip;
  unsigned samples = 5;
  unsigned growth = 3;
  std::vector<long> perturb;  // row col delta, 1-based indices
  bool quiet = false;
};

int run_verify(const VerifyArgs& a) {
  VerifyOptions o;
  o.seed = a.seed;
  o.samples = a.samples;
  o.skip.insert(a.skip.begin(), a.skip.end());
  o.growth_n = a.growth;
  if (!a.perturb.empty()) {
    if (a.perturb.size() != 3 || a.perturb[0] < 1 || a.perturb[0] > 5 || a.perturb[1] < 1 || a.perturb[1] > 5) {
      throw UsageError("--perturb-matrix takes ROW COL DELTA with ROW, COL in 1..5");
    }
    o.perturb_matrix = MatrixPerturbation{static_cast<std::size_t>(a.perturb[0] - 1),
                                          static_cast<std::size_t>(a.perturb[1] - 1), a.perturb[2]};
  }
  if (!a.quiet) o.progress = &std::cerr;
  Certificate cert;
  try {
    cert = verify(o);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string text = cert.dump(true);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f || !(f << text)) {
      std::cerr << "cannot write " << a.out << "\n";
      return kExitFail;
    }
  }
  if (!cert.pass) {
    const CheckRecord* r = cert.find(*cert.failed_check);
    std::cerr << "FAILED: " << *cert.failed_check << (r ? ": " + r->failure : std::string()) << "\n";
    return kExitFail;
  }
  std::cerr << "overall pass, lambda1 = " << cert.lambda1.value_or(0) << ", lambda2 = " << cert.lambda2.value_or(0)
            << (cert.lambda2_assumed ? " (assumed)" : "") << "\n";
  return 0;
}

// ------------------------------------------------------------------ topdeg

int run_topdeg(unsigned samples, std::uint64_t seed) {
  const TopologicalDegree td = topological_degree(samples, seed);
  std::cout << "seed " << seed << "\n";
  for (std::size_t i = 0; i < td.samples.size(); ++i) {
    const PreimageSample& s = td.samples[i];
    std::cout << "sample " << i + 1 << ": target (" << to_string(s.c1) << ", " << to_string(s.c2) << "), eliminant degree "
              << s.eliminant_degree << ", after base points " << s.stripped_degree << ", preimages "
              << s.preimages.size() << "\n";
    for (const Preimage& p : s.preimages) {
      std::cout << "  x = " << cplx(p.x) << "   y = " << cplx(p.y) << "   residual " << std::scientific
                << std::setprecision(2) << static_cast<double>(p.residual) << std::defaultfloat << "\n";
    }
  }
  for (const auto& d : td.degenerate_log) std::cout << "degenerate: " << d << "\n";
  if (!td.degree) {
    std::cout << "preimage counts disagree\n";
    return kExitFail;
  }
  std::cout << "topological degree " << *td.degree << "\n";
  return 0;
}

// ----------------------------------------------------------------- compose

int run_compose(unsigned n) {
  if (n < 1 || n > 4) throw UsageError("--n must be in 1..4");
  const auto rows = degree_growth(n, pullback_matrix());
  std::cout << std::left << std::setw(4) << "n" << std::setw(14) << "symbolic" << std::setw(14) << "predicted"
            << "seconds\n";
  bool ok = true;
  for (const auto& r : rows) {
    const std::string s = "(" + std::to_string(r.symbolic.dx) + "," + std::to_string(r.symbolic.dy) + ")";
    const std::string p = "(" + std::to_string(r.predicted.dx) + "," + std::to_string(r.predicted.dy) + ")";
    std::cout << std::setw(4) << r.n << std::setw(14) << s << std::setw(14) << p << std::fixed << std::setprecision(3)
              << r.seconds << std::defaultfloat << "\n";
    ok = ok && r.symbolic == r.predicted;
  }
  return ok ? 0 : kExitFail;
}

// ----------------------------------------------------------------- polygon

std::vector<Polygon<Rational>> read_polygons(std::istream& in) {
  std::vector<Polygon<Rational>> out;
  Polygon<Rational> cur;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 3) throw UsageError("line " + std::to_string(lineno) + ": expected three rationals");
    ProjPoint<Rational> p;
    try {
      for (std::size_t k = 0; k < 3; ++k) p.v[k] = parse_rational(tok[k]);
    } catch (const std::exception&) {
      throw UsageError("line " + std::to_string(lineno) + ": bad rational");
    }
    cur.push_back(p);
    if (cur.size() == 5) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) throw UsageError("vertex count is not a multiple of 5");
  return out;
}

struct PolygonRow {
  bool convex = false;
  std::optional<unsigned> iterations;
  std::string note;
};

int run_polygon(const std::string& input, unsigned random_n, std::uint64_t seed, double tol, unsigned max_iter,
                unsigned threads) {
  std::vector<Polygon<Rational>> polys;
  if (!input.empty()) {
    std::ifstream f(input);
    if (!f) throw UsageError("cannot open " + input);
    polys = read_polygons(f);
  } else {
    std::mt19937_64 rng(seed);
    for (unsigned i = 0; i < random_n; ++i) polys.push_back(random_convex_pentagon(rng));
  }
  if (polys.empty()) throw UsageError("no pentagons given; use --input or --random-convex");

  std::vector<PolygonRow> rows(polys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < polys.size(); i = next++) {
      PolygonRow& r = rows[i];
      r.convex = is_convex(polys[i]);
      try {
        r.iterations = converge_to_regular(to_double(polys[i]), tol, max_iter);
      } catch (const NoConvergence& e) {
        r.note = e.what();
      } catch (const std::runtime_error& e) {
        r.note = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::cout << std::left << std::setw(6) << "#" << std::setw(8) << "convex" << "iterations\n";
  unsigned converged = 0, max_seen = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::cout << std::setw(6) << i + 1 << std::setw(8) << (rows[i].convex ? "yes" : "no");
    if (rows[i].iterations) {
      ++converged;
      max_seen = std::max(max_seen, *rows[i].iterations);
      std::cout << *rows[i].iterations << "\n";
    } else {
      std::cout << "-  " << rows[i].note << "\n";
    }
  }
  std::cout << converged << "/" << rows.size() << " converged within " << tol << ", max iterations " << max_seen << "\n";
  return converged == rows.size() ? 0 : kExitFail;
}

// ------------------------------------------------------------------ render

std::pair<unsigned, unsigned> parse_size(const std::string& s) {
  unsigned w = 0, h = 0;
  char x = 0;
  std::istringstream ss(s);
  if (!(ss >> w >> x >> h) || (x != 'x' && x != 'X') || !ss.eof() || w == 0 || h == 0) {
    throw UsageError("--size expects WxH, got " + s);
  }
  return {w, h};
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

int run_render(RenderConfig cfg, const std::vector<double>& region, const std::string& size, const std::string& out) {
  if (!region.empty()) {
    if (region.size() != 4) throw UsageError("--region takes xmin xmax ymin ymax");
    cfg.xmin = region[0];
    cfg.xmax = region[1];
    cfg.ymin = region[2];
    cfg.ymax = region[3];
  }
  if (!size.empty()) std::tie(cfg.width, cfg.height) = parse_size(size);
  if (!(cfg.xmax > cfg.xmin) || !(cfg.ymax > cfg.ymin)) throw UsageError("empty region");
  if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
  const bool png = ends_with(out, ".png");
  if (!png && !ends_with(out, ".ppm")) throw UsageError("--out must end in .ppm or .png");

  const Image img = render(cfg);
  write_file(out, png ? encode_png(img) : encode_ppm(img));
  std::size_t counts[3] = {0, 0, 0};
  for (PixelClass c : img.labels) ++counts[static_cast<int>(c)];
  std::cout << "wrote " << out << " (" << cfg.width << "x" << cfg.height << ")\n"
            << "basin " << counts[0] << ", non-basin " << counts[1] << ", guarded " << counts[2] << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Projective heat map: dynamical degree certificate and experiments", "phm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "run every check and write the certificate");
  verify_cmd->add_option("--out", va.out, "certificate file (default: stdout)");
  verify_cmd->add_option("--seed", va.seed, "seed for randomized checks")->capture_default_str();
  verify_cmd->add_option("--skip", va.skip, "check id to mark as assumed (repeatable)")->take_all();
  verify_cmd->add_option("--samples", va.samples, "generic targets for preimage counting")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1000u));
  verify_cmd->add_option("--growth", va.growth, "iterate depth for the degree growth check")
      ->capture_default_str()
      ->check(CLI::Range(1u, 4u));
  verify_cmd->add_option("--perturb-matrix", va.perturb, "fault injection: ROW COL DELTA")->expected(3)->group("");
  verify_cmd->add_flag("--quiet", va.quiet, "no progress lines");

  unsigned td_samples = 5;
  std::uint64_t td_seed = 42;
  auto* topdeg_cmd = app.add_subcommand("topdeg", "count preimages of generic rational targets");
  topdeg_cmd->add_option("--samples", td_samples)->capture_default_str()->check(CLI::Range(1u, 1000u));
  topdeg_cmd->add_option("--seed", td_seed)->capture_default_str();

  unsigned compose_n = 3;
  auto* compose_cmd = app.add_subcommand("compose", "bidegrees of reduced iterates against matrix predictions");
  compose_cmd->add_option("--n", compose_n, "number of iterates (1..4)")->capture_default_str();

  std::string poly_input;
  unsigned poly_random = 0;
  std::uint64_t poly_seed = 42;
  double poly_tol = 1e-6;
  unsigned poly_max_iter = 100;
  auto* polygon_cmd = app.add_subcommand("polygon", "iterate the projective heat map on pentagons");
  auto* in_opt = polygon_cmd->add_option("--input", poly_input, "rows of homogeneous rational triples, 5 per pentagon");
  auto* rnd_opt = polygon_cmd->add_option("--random-convex", poly_random, "number of random convex pentagons");
  in_opt->excludes(rnd_opt);
  polygon_cmd->add_option("--seed", poly_seed)->capture_default_str();
  polygon_cmd->add_option("--tol", poly_tol)->capture_default_str();
  polygon_cmd->add_option("--max-iter", poly_max_iter)->capture_default_str();

  RenderConfig rc;
  std::vector<double> region;
  std::string size;
  std::string out = "basin.ppm";
  unsigned threads_flag = 0;
  auto* render_cmd = app.add_subcommand("render", "basin of the attracting fixed point");
  render_cmd->add_option("--region", region, "xmin xmax ymin ymax")->expected(4);
  render_cmd->add_option("--size", size, "WxH (default 512x512)");
  render_cmd->add_option("--max-iter", rc.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  render_cmd->add_option("--tol", rc.tol)->capture_default_str();
  render_cmd->add_option("--threads", threads_flag, "worker threads (default PHM_THREADS or 1)");
  render_cmd->add_option("--out", out, ".ppm or .png")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e);
    return rc_code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify_cmd) return run_verify(va);
    if (*topdeg_cmd) return run_topdeg(td_samples, td_seed);
    if (*compose_cmd) return run_compose(compose_n);
    const unsigned threads = threads_flag ? threads_flag : env_threads(1);
    if (*polygon_cmd) return run_polygon(poly_input, poly_random, poly_seed, poly_tol, poly_max_iter, threads);
    if (*render_cmd) {
      rc.threads = threads;
      return run_render(rc, region, size, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace phm

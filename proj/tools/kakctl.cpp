// kakctl: structure dumps, verification suites and moment scans; JSON on stdout, progress on stderr.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kak/suites.hpp"

namespace {

constexpr int kUsage = 64;

int exitCode(kak::Verdict v) {
  switch (v) {
    case kak::Verdict::Pass:
      return 0;
    case kak::Verdict::Fail:
      return 1;
    case kak::Verdict::Inconclusive:
      return 2;
  }
  return 2;
}

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool isInt(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

// Positional tokens: [group] [N] [suite]; --group can replace the first.
void resolveTarget(std::vector<std::string> tok, std::string& group, int& N, std::string* suite) {
  if (!tok.empty() && (tok.front() == "g2" || tok.front() == "spn" || tok.front() == "sun")) {
    group = tok.front();
    tok.erase(tok.begin());
  }
  if (group.empty()) throw UsageError("missing group (g2 or spn)");
  if (group == "sun") throw UsageError("sun is only available through the library API");
  if (group != "g2" && group != "spn") throw UsageError("unknown group \"" + group + "\"");
  if (!tok.empty() && isInt(tok.front())) {
    N = std::stoi(tok.front());
    tok.erase(tok.begin());
  } else if (group == "spn" && N <= 0) {
    throw UsageError("spn needs N");
  }
  if (suite) {
    if (tok.size() != 1) throw UsageError("expected exactly one suite: structure, jacobian, haar, transform, hull");
    *suite = tok.front();
  }
  if (!tok.empty() && !suite) throw UsageError("unexpected argument \"" + tok.front() + "\"");
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const nlohmann::json& j, const std::string& out) {
  const std::string text = kak::dumpJson(j) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-angle charts, Haar measures and moment scans for Sp(N) and G2"};
  app.require_subcommand(1);

  std::string group, out;
  int N = 0, order = 40, Pmax = 0, threads = 1;
  long samples = 1000000;
  std::uint64_t seed = 1;
  double tol = -1;
  auto common = [&](CLI::App* c) {
    c->add_option("--group", group, "g2 or spn");
    c->add_option("--out", out, "write the report here instead of stdout");
  };

  auto* dump = app.add_subcommand("dump-structure", "generators, Cartan split, roots, region A, M");
  std::vector<std::string> dumpArgs;
  dump->add_option("target", dumpArgs, "g2 | spn N");
  common(dump);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::vector<std::string> verifyArgs;
  verify->add_option("target", verifyArgs, "g2|spn N, then structure|jacobian|haar|transform|hull");
  common(verify);
  verify->add_option("--order", order, "Gauss-Legendre order")->check(CLI::Range(2, 400));
  verify->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--Pmax,--P", Pmax, "largest moment power")->check(CLI::Range(1, 64));
  verify->add_option("--tol", tol, "tolerance override for quadrature checks")->check(CLI::PositiveNumber);
  verify->add_option("--threads", threads, "worker cap")->check(CLI::Range(1, 256));

  auto* scan = app.add_subcommand("scan-conjecture", "moment scan of an admissible function");
  std::string input, weight = "flat";
  int batch = 0, bk = 2, bl = 2, bN = 4, scanPmax = 4, scanOrder = 24;
  long scanSamples = 0;
  scan->add_option("input", input, "admissible-function file");
  common(scan);
  scan->add_option("--weight", weight, "flat | g2 | spn:N");
  scan->add_option("--Pmax,--P", scanPmax, "largest moment power")->check(CLI::Range(1, 64));
  scan->add_option("--order", scanOrder, "cube quadrature order")->check(CLI::Range(0, 400));
  scan->add_option("--samples", scanSamples, "Monte Carlo fallback samples")->check(CLI::NonNegativeNumber);
  scan->add_option("--seed", seed, "RNG seed");
  scan->add_option("--threads", threads, "worker cap")->check(CLI::Range(1, 256));
  scan->add_option("--tol", tol, "unused by scans; accepted for uniformity");
  scan->add_option("--batch", batch, "scan this many random functions instead of a file")->check(CLI::Range(1, 100000));
  scan->add_option("--N", bN, "batch: admissibility bound")->check(CLI::Range(1, 64));
  scan->add_option("--k", bk, "batch: cube variables")->check(CLI::Range(0, 16));
  scan->add_option("--l", bl, "batch: circle variables")->check(CLI::Range(0, 16));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (dump->parsed()) {
      resolveTarget(dumpArgs, group, N, nullptr);
      emit(kak::dumpStructure(group, N), out);
      return 0;
    }
    if (verify->parsed()) {
      std::string suite;
      resolveTarget(verifyArgs, group, N, &suite);
      kak::SuiteConfig cfg;
      cfg.group = group;
      cfg.N = N > 0 ? N : 1;
      cfg.order = order;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.Pmax = Pmax;
      cfg.tol = tol;
      cfg.threads = threads;
      const auto r = kak::runSuite(suite, cfg, &std::cerr);
      emit(r.report, out);
      return exitCode(r.verdict);
    }
    kak::ScanConfig sc;
    sc.weight = weight;
    sc.Pmax = scanPmax;
    sc.budget.order = scanOrder;
    sc.budget.samples = scanSamples;
    sc.budget.seed = seed;
    sc.budget.threads = threads;
    if (batch > 0) {
      if (!input.empty()) throw UsageError("give either an input file or --batch");
      const auto fs = kak::randomAdmissibleBatch(batch, bN, bk, bl, seed);
      auto r = kak::scanBatch(fs, sc, &std::cerr);
      r.report["batch"] = {{"N", bN}, {"k", bk}, {"l", bl}, {"seed", seed}};
      emit(r.report, out);
      return exitCode(r.verdict);
    }
    if (input.empty()) throw UsageError("scan-conjecture needs an input file or --batch");
    const auto f = kak::parseAdmissible(readFile(input));
    auto r = kak::scanConjecture(f, sc);
    r.report["seed"] = seed;
    emit(r.report, out);
    return exitCode(r.verdict);
  } catch (const kak::ParseError& e) {
    std::cerr << "parse error at line " << e.line << ", column " << e.column << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

#pragma once

#include <json.hpp>

#include <iosfwd>

#include "kak/admissible.hpp"

namespace kak {

enum class Verdict { Pass, Fail, Inconclusive };
std::string toString(Verdict v);

struct SuiteConfig {
  std::string group = "g2";  // "g2" or "spn"
  int N = 1;
  int order = 40;
  long samples = 1000000;
  std::uint64_t seed = 1;
  int Pmax = 0;       // 0: suite default (3 for Sp(N), 2 for G2)
  double tol = -1;    // < 0: suite default
  int threads = 1;
};

struct SuiteResult {
  Verdict verdict = Verdict::Inconclusive;
  nlohmann::json report;
};

// suite in {structure, jacobian, haar, transform, hull}; progress lines go to `log` when non-null.
SuiteResult runSuite(const std::string& suite, const SuiteConfig& cfg, std::ostream* log = nullptr);

nlohmann::json dumpStructure(const std::string& group, int N);

// Weight selectors: "g2", "spn:N", "flat" (w = 1 on [0,1]^k).
WeightSpec weightBySelector(const std::string& selector, int k);

struct ScanConfig {
  std::string weight = "flat";
  int Pmax = 4;
  MomentBudget budget;
};

nlohmann::json scanReportJson(const AdmissibleFunction& f, const ScanReport& r);
// One function: the scan, re-run at 10x budget when flagged.
SuiteResult scanConjecture(const AdmissibleFunction& f, const ScanConfig& cfg);

// Random 1/N-admissible functions on [0,1]^k x (S*)^l.
std::vector<AdmissibleFunction> randomAdmissibleBatch(int count, int N, int k, int l, std::uint64_t seed);
SuiteResult scanBatch(const std::vector<AdmissibleFunction>& fs, const ScanConfig& cfg, std::ostream* log = nullptr);

// Brute-force Caratheodory decision: some affinely independent subset of <= d+1 points has 0 in its simplex.
bool zeroInHullBruteForce(const std::vector<ExponentVec>& points);

// Serialize with a fixed layout (sorted keys, full double precision).
std::string dumpJson(const nlohmann::json& j);

}  // namespace kak

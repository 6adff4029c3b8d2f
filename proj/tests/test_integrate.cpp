#include <doctest.h>

#include <thread>

#include "kak/integrate.hpp"
#include "kak/spn.hpp"
#include "kak/sun.hpp"

using namespace kak;

TEST_CASE("Gauss-Legendre rule integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 5, 20}) {
    const GLRule& r = gaussLegendre(n);
    for (int d = 0; d < 2 * n; ++d) {
      double s = 0;
      for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], d);
      CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS(gaussLegendre(0));
}

TEST_CASE("tensor rule on a product integrand") {
  const auto r = tensorIntegrate({12, 12}, 1, [](const double* u, cplx* out) {
    out[0] = std::exp(u[0]) * u[1] * u[1];
    return 1.0;
  });
  CHECK(std::abs(r.weighted[0] - cplx((std::exp(1.0) - 1) / 3)) < 1e-13);
}

TEST_CASE("Monte Carlo is reproducible and thread-count independent") {
  auto kernel = [](std::mt19937_64& rng, cplx* out) {
    std::uniform_real_distribution<double> U(0, 1);
    const double x = U(rng);
    out[0] = x * x;
    return 1.0;
  };
  const auto a = monteCarlo(50000, 7, 1, 1, kernel);
  const auto b = monteCarlo(50000, 7, 3, 1, kernel);
  CHECK(a.weighted[0] == b.weighted[0]);
  CHECK(std::abs(a.weighted[0] - 1.0 / 3) < 4 * a.sigma[0]);
  CHECK(a.sigma[0] > 0);
}

TEST_CASE("poisoned integrands are reported") {
  CHECK_THROWS_AS(tensorIntegrate({4}, 1,
                                  [](const double* u, cplx* out) {
                                    out[0] = u[0] > 0.5 ? std::nan("") : 0.0;
                                    return 1.0;
                                  }),
                  PoisonedIntegrandError);
}

TEST_CASE("cube-torus integral of a pure phase vanishes") {
  CubeTorusDomain dom{1, 2, {}};
  QuadratureSpec spec;
  spec.method = QuadratureMethod::UniformCircle;
  spec.order = 16;
  const auto r = integrateCubeTorus([](const double*, const double* t) { return std::exp(cplx(0, 1) * (t[0] - 2 * t[1])); },
                                    [](const double* x) { return x[0]; }, dom, spec);
  CHECK(std::abs(r.value) < 1e-12);
  const auto one = integrateCubeTorus([](const double*, const double*) { return cplx(1); }, [](const double* x) { return x[0]; },
                                      dom, spec);
  CHECK(std::abs(one.value - cplx(0.5 * 4 * kPi * kPi)) < 1e-10);
}

TEST_CASE("chart MC with and without the exact sampler agree on Sp(1)") {
  const EulerChart c = buildSpNChart(1);
  QuadratureSpec s;
  s.method = QuadratureMethod::MonteCarlo;
  s.samples = 200000;
  s.seed = 3;
  auto f = [](const CMat& g) { return cplx(std::norm(g(0, 0))); };
  const auto a = integrateChart(c, f, s);
  s.useExactSampler = false;
  const auto b = integrateChart(c, f, s);
  CHECK(std::abs(a.value - 0.5) < 4 * a.errorEstimate);
  CHECK(std::abs(b.value - 0.5) < 4 * b.errorEstimate);
}

TEST_CASE("Kahan sum keeps small addends") {
  KahanSum k;
  k.add(1e16);
  for (int i = 0; i < 1000; ++i) k.add(1.0);
  k.add(-1e16);
  CHECK(k.value() == 1000.0);
}

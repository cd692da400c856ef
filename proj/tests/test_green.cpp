#include "metascreen/green.hpp"

#include <cmath>
#include <doctest.h>

#include "metascreen/errors.hpp"
#include "oracles.hpp"

using namespace metascreen;

namespace {
const Lattice kLat{10.0};
const EwaldParams kEwald{};
const Complex kI(0.0, 1.0);
}  // namespace

TEST_CASE("f_alpha branch values") {
  CHECK(f_alpha(0.0, 2.0) == Complex(1.0, 0.0));
  CHECK(std::abs(f_alpha(1.0, 0.0) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(f_alpha(-4.0, 0.0) == Complex(0.25, 0.0));
}

TEST_CASE("f_alpha solves the homogeneous equation away from the origin") {
  for (double alpha : {2.3, -1.7}) {
    for (double x : {0.5, -1.2, 3.0}) {
      double h = 1e-4;
      Complex lap = (f_alpha(alpha, x + h) - 2.0 * f_alpha(alpha, x) + f_alpha(alpha, x - h)) /
                    (h * h);
      Complex resid = lap + alpha * f_alpha(alpha, x);
      CHECK(std::abs(resid) < 1e-5 * std::abs(f_alpha(alpha, x)));
    }
  }
}

TEST_CASE("spec-point agreement of spectral and direct evaluators") {
  // d = (0.3 a, 0.7 a), ka = 0.4, theta = pi/3
  Wavenumbers wn = Wavenumbers::incidence(0.04, M_PI / 3.0);
  Vec2 d(3.0, 7.0);
  Complex gd = green_direct(kLat, wn, d, 100000, true);
  Complex gs = green_spectral(kLat, wn, d, 40);
  Complex ge = green_ewald(kLat, wn, d, Vec2(0, 0), kEwald);
  CHECK(std::abs(gs - gd) < 1e-8);
  CHECK(std::abs(ge - gd) < 1e-8);
}

TEST_CASE("three-evaluator agreement on randomized triples") {
  auto rng = oracles::seeded_rng(77);
  std::uniform_real_distribution<double> ux(0.05, 0.95), uh(0.2, 1.2), uk(0.1, 1.0),
      uth(1.0, M_PI / 2.0);
  for (int i = 0; i < 12; ++i) {
    Wavenumbers wn = Wavenumbers::incidence(uk(rng) / kLat.period, uth(rng));
    Vec2 d(ux(rng) * kLat.period, uh(rng) * kLat.period);
    Complex ge = green_ewald(kLat, wn, d, Vec2(0, 0), kEwald);
    Complex gs = green_spectral(kLat, wn, d, 40);
    Complex gd = green_direct(kLat, wn, d, 4000, true);
    CHECK(std::abs(ge - gs) < 1e-7);
    CHECK(std::abs(ge - gd) < 1e-7);
  }
}

TEST_CASE("large height is dominated by the propagating mode") {
  Wavenumbers wn{0.05, 0.0};  // ka = 0.5, normal incidence
  double h = 5.0 * kLat.period;
  Complex full = green_spectral(kLat, wn, Vec2(0.0, h), 40);
  Complex mode = std::exp(kI * (wn.k * h)) / (2.0 * kI * wn.k * kLat.cell_measure());
  CHECK(std::abs(full - mode) < 1e-6 * std::abs(mode));
}

TEST_CASE("quasi-periodicity for all evaluators") {
  Wavenumbers wn = Wavenumbers::incidence(0.07, 1.1);
  Vec2 d(2.3, 4.1);
  Complex shift = std::exp(-kI * (wn.kbar * kLat.period));
  Complex ge = green_ewald(kLat, wn, d, Vec2(0, 0), kEwald);
  Complex ge2 = green_ewald(kLat, wn, Vec2(d.x() + kLat.period, d.y()), Vec2(0, 0), kEwald);
  CHECK(std::abs(ge2 - shift * ge) < 1e-10);
  Complex gs = green_spectral(kLat, wn, d, 40);
  Complex gs2 = green_spectral(kLat, wn, Vec2(d.x() + kLat.period, d.y()), 40);
  CHECK(std::abs(gs2 - shift * gs) < 1e-12);
  Complex gd = green_direct(kLat, wn, d, 3000, true);
  Complex gd2 = green_direct(kLat, wn, Vec2(d.x() + kLat.period, d.y()), 3000, true);
  CHECK(std::abs(gd2 - shift * gd) < 1e-8);
}

TEST_CASE("mirror symmetry at normal incidence") {
  Wavenumbers wn{0.04, 0.0};
  Vec2 d(1.7, 2.9);
  Complex a = green_direct(kLat, wn, d, 2000, true);
  Complex b = green_direct(kLat, wn, Vec2(-d.x(), d.y()), 2000, true);
  CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("static closed form matches the modal series") {
  for (auto [xb, xd] : {std::pair{1.7, 2.3}, std::pair{4.9, 0.4}, std::pair{0.3, 6.0}}) {
    double series = std::fabs(xd) / (2.0 * kLat.cell_measure());
    for (int m = 1; m <= 2000; ++m) {
      double l = kLat.reciprocal_step() * m;
      series -= 2.0 * std::cos(l * xb) * std::exp(-l * std::fabs(xd)) /
                (2.0 * kLat.cell_measure() * l);
    }
    CHECK(green_static(kLat, Vec2(xb, xd)) == doctest::Approx(series).epsilon(1e-10));
  }
}

TEST_CASE("static gradient matches finite differences") {
  Vec2 d(2.1, 1.3);
  double h = 1e-6;
  Vec2 g = green_static_gradient(kLat, d);
  double gx = (green_static(kLat, Vec2(d.x() + h, d.y())) -
               green_static(kLat, Vec2(d.x() - h, d.y()))) / (2 * h);
  double gy = (green_static(kLat, Vec2(d.x(), d.y() + h)) -
               green_static(kLat, Vec2(d.x(), d.y() - h))) / (2 * h);
  CHECK(g.x() == doctest::Approx(gx).epsilon(1e-8));
  CHECK(g.y() == doctest::Approx(gy).epsilon(1e-8));
}

TEST_CASE("Ewald value is independent of the splitting parameter") {
  Wavenumbers wn = Wavenumbers::incidence(0.06, 1.2);
  Vec2 d(3.1, 2.2);
  double base = std::sqrt(M_PI) / kLat.period;
  EwaldParams big{0.0, 8, 25, 8};
  Complex ref = green_ewald(kLat, wn, d, Vec2(0, 0), big);
  for (double factor : {0.5, 1.0, 2.0}) {
    EwaldParams p{factor * base, 8, 25, 8};
    CHECK(std::abs(green_ewald(kLat, wn, d, Vec2(0, 0), p) - ref) < 1e-7);
  }
}

TEST_CASE("Ewald gradient matches finite differences") {
  Wavenumbers wn = Wavenumbers::incidence(0.05, 1.0);
  EwaldWorkspace ws(kLat, wn, kEwald);
  Vec2 d(2.7, 1.9);
  double h = 1e-6;
  Vec2c g = ws.gradient(d);
  Complex gx = (ws.value(Vec2(d.x() + h, d.y())) - ws.value(Vec2(d.x() - h, d.y()))) / (2 * h);
  Complex gy = (ws.value(Vec2(d.x(), d.y() + h)) - ws.value(Vec2(d.x(), d.y() - h))) / (2 * h);
  CHECK(std::abs(g.x() - gx) < 1e-9);
  CHECK(std::abs(g.y() - gy) < 1e-9);
}

TEST_CASE("Ewald self limit matches the subtracted value at small displacement") {
  Wavenumbers wn = Wavenumbers::incidence(0.04, M_PI / 3.0);
  EwaldWorkspace ws(kLat, wn, kEwald);
  Complex lim = ws.self_limit();
  for (double eps : {1e-4, 1e-5}) {
    Vec2 d(0.6 * eps, 0.8 * eps);
    Complex probe = ws.value(d) + 0.25 * kI * hankel1_0(wn.k * d.norm());
    CHECK(std::abs(probe - lim) < 50.0 * eps);
  }
  Vec2c glim = ws.self_limit_gradient();
  double h = 1e-4;
  auto L = [&](Vec2 d) {
    return ws.value(d) + 0.25 * kI * hankel1_0(wn.k * d.norm());
  };
  Complex fd = (L(Vec2(h, 0.0)) - L(Vec2(-h, 0.0))) / (2.0 * h);
  CHECK(std::abs(glim.x() - fd) < 1e-6);
  CHECK(std::abs(glim.y()) == 0.0);
}

TEST_CASE("half-space function vanishes on the plane") {
  Wavenumbers wn{0.05, 0.0};
  EwaldWorkspace ws(kLat, wn, kEwald);
  for (double xb : {0.3, 2.0, 7.7}) {
    CHECK(std::abs(halfspace_green_ewald(ws, Vec2(xb, 0.0), Vec2(1.0, 2.0))) < 1e-14);
    CHECK(std::fabs(halfspace_green_static(kLat, Vec2(xb, 0.0), Vec2(1.0, 2.0))) < 1e-14);
  }
}

TEST_CASE("half-space function is not translation invariant") {
  Wavenumbers wn{0.05, 0.0};
  EwaldWorkspace ws(kLat, wn, kEwald);
  Vec2 x(1.2, 2.0), y(0.4, 1.1);
  Complex a = halfspace_green_ewald(ws, x, y);
  Complex b = halfspace_green_ewald(ws, Vec2(x.x() + 0.0, x.y() + 1.5), Vec2(y.x(), y.y() + 1.5));
  CHECK(std::abs(a - b) > 1e-3);
}

TEST_CASE("half-space Helmholtz residual vanishes under five-point refinement") {
  Wavenumbers wn{0.08, 0.0};
  EwaldWorkspace ws(kLat, wn, kEwald);
  Vec2 x(1.4, 2.6), y(0.2, 1.2);
  auto G = [&](Vec2 p) { return halfspace_green_ewald(ws, p, y); };
  auto resid = [&](double h) {
    Complex lap = (G(Vec2(x.x() + h, x.y())) + G(Vec2(x.x() - h, x.y())) +
                   G(Vec2(x.x(), x.y() + h)) + G(Vec2(x.x(), x.y() - h)) - 4.0 * G(x)) /
                  (h * h);
    return std::abs(lap + wn.k * wn.k * G(x));
  };
  double scale = std::abs(G(x));
  double r1 = resid(0.05), r2 = resid(0.025);
  CHECK(r1 < 1e-4 * scale / (0.05 * 0.05));
  CHECK(r2 < 0.5 * r1);  // O(h^2) decay
}

TEST_CASE("evanescent content is negligible one period above the sources") {
  Wavenumbers wn{0.04, 0.0};
  double h = kLat.period;
  Complex full = green_spectral(kLat, wn, Vec2(1.3, h), 40);
  Complex mode = std::exp(kI * (wn.k * h)) / (2.0 * kI * wn.k * kLat.cell_measure());
  CHECK(std::abs(full - mode) < 1e-2 * std::abs(full));
}

TEST_CASE("spectral and Ewald agree away from the source plane") {
  Wavenumbers wn = Wavenumbers::incidence(0.09, 1.3);
  for (double xd : {0.2 * kLat.period, 0.5 * kLat.period}) {
    Vec2 d(4.2, xd);
    CHECK(std::abs(green_spectral(kLat, wn, d, 40) -
                   green_ewald(kLat, wn, d, Vec2(0, 0), kEwald)) < 1e-8);
  }
}

TEST_CASE("domain and regime errors") {
  Wavenumbers wn{0.05, 0.0};
  CHECK_THROWS_AS(green_spectral(kLat, wn, Vec2(1.0, 0.0), 20), DomainError);
  CHECK_THROWS_AS(green_ewald(kLat, wn, Vec2(0.0, 0.0), Vec2(0.0, 0.0), kEwald), DomainError);
  Wavenumbers above{1.3 * kLat.reciprocal_step(), 0.0};
  CHECK_THROWS_AS(green_spectral(kLat, above, Vec2(1.0, 1.0), 20), RegimeError);
  Wavenumbers wood{kLat.reciprocal_step(), 0.0};
  CHECK_THROWS_AS(green_ewald(kLat, wood, Vec2(1.0, 1.0), Vec2(0, 0), kEwald), RegimeError);
}

TEST_CASE("g1 lattice series symmetries") {
  for (auto [xb, xd] : {std::pair{1.3, 0.8}, std::pair{3.7, 2.2}}) {
    Complex a = g1_lattice(kLat, Vec2(xb, xd), 40);
    CHECK(std::abs(a - g1_lattice(kLat, Vec2(xb, -xd), 40)) < 1e-12);
    CHECK(std::abs(a + g1_lattice(kLat, Vec2(-xb, xd), 40)) < 1e-12);
    CHECK(std::fabs(a.real()) < 1e-14);  // purely imaginary
  }
}

TEST_CASE("first-order image combination is antisymmetric") {
  auto g1p = [&](const Vec2& x, const Vec2& y) {
    return g1_lattice(kLat, Vec2(x.x() - y.x(), x.y() - y.y()), 60) -
           g1_lattice(kLat, Vec2(x.x() - y.x(), x.y() + y.y()), 60);
  };
  Vec2 x(1.1, 2.0), y(-0.4, 1.3);
  CHECK(std::abs(g1p(x, y) + g1p(y, x)) < 1e-10);
}

TEST_CASE("expansion terms match a wavenumber-scale Richardson quotient") {
  Wavenumbers wn = Wavenumbers::incidence(0.04, M_PI / 3.0);
  Vec2 x(1.1, 2.0), y(-0.4, 1.3);
  LowFreqTerms terms = green_expansion_terms(kLat, wn, x, y, 60);
  CHECK(terms.g0_plus == doctest::Approx(halfspace_green_static(kLat, x, y)).epsilon(1e-12));

  auto quotient = [&](double eps) {
    Wavenumbers scaled{eps * wn.k, eps * wn.kbar};
    EwaldParams p{0.0, 8, 25, 8};
    EwaldWorkspace ws(kLat, scaled, p);
    Complex geps = halfspace_green_ewald(ws, x, y);
    return (geps - Complex(terms.g0_plus, 0.0)) / eps;
  };
  double e1 = std::abs(quotient(1e-2) - terms.g1_plus);
  double e2 = std::abs(quotient(1e-3) - terms.g1_plus);
  CHECK(e2 < 0.2 * e1);  // first-order convergence
  CHECK(e2 < 1e-6);
}

TEST_CASE("first-order expansion term is harmonic away from sources") {
  Wavenumbers wn = Wavenumbers::incidence(0.04, M_PI / 3.0);
  Vec2 y(-0.4, 1.3);
  Vec2 x(1.6, 2.4);
  auto g1_at = [&](const Vec2& p) {
    return green_expansion_terms(kLat, wn, p, y, 80).g1_plus;
  };
  auto laplacian = [&](double h) {
    Complex lap = (g1_at(Vec2(x.x() + h, x.y())) + g1_at(Vec2(x.x() - h, x.y())) +
                   g1_at(Vec2(x.x(), x.y() + h)) + g1_at(Vec2(x.x(), x.y() - h)) -
                   4.0 * g1_at(x)) /
                  (h * h);
    return std::abs(lap);
  };
  double r1 = laplacian(0.08), r2 = laplacian(0.04);
  double scale = std::abs(g1_at(x));
  CHECK(r1 < 1e-2 * scale / (0.08 * 0.08));
  CHECK(r2 < 0.3 * r1);  // O(h^2) decay of the residual
}

TEST_CASE("expansion tail bound is honest") {
  Wavenumbers wn{0.04, 0.0};
  Vec2 x(1.0, 2.0), y(0.5, 1.1);
  LowFreqTerms t20 = green_expansion_terms(kLat, wn, x, y, 20);
  LowFreqTerms t60 = green_expansion_terms(kLat, wn, x, y, 60);
  CHECK(std::abs(t20.g1_plus - t60.g1_plus) < 2.0 * t20.tail_bound + 1e-14);
  // equal heights: the difference series converges slowly and the bound says so
  LowFreqTerms flat = green_expansion_terms(kLat, wn, Vec2(1.0, 1.5), Vec2(0.0, 1.5), 20);
  CHECK(flat.tail_bound == doctest::Approx(1.0));
}

TEST_CASE("direct sum oracle self-consistency under acceleration depth") {
  Wavenumbers wn = Wavenumbers::incidence(0.04, M_PI / 3.0);
  Vec2 d(3.0, 7.0);
  Complex a = green_direct(kLat, wn, d, 2000, true);
  Complex b = green_direct(kLat, wn, d, 8000, true);
  CHECK(std::abs(a - b) < 1e-9);
}

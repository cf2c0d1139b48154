// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here; exit status is non-zero when any criterion fails.
//
// Usage: acceptance [criterion numbers...]   (default: all)

#include "gsp4/bessel.hpp"
#include "gsp4/expsums.hpp"
#include "gsp4/gamma.hpp"
#include "gsp4/lfun.hpp"
#include "gsp4/moments.hpp"
#include "gsp4/petersson.hpp"
#include "gsp4/psi.hpp"
#include "gsp4/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace gsp4;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome zero_space() {
  const std::vector<std::pair<HalfIntegralForm, HalfIntegralForm>> pairs = {
      {{1, 0, 1}, {1, 0, 1}}, {{1, 1, 1}, {1, 1, 1}}, {{1, 0, 1}, {1, 0, 2}},
      {{1, 1, 1}, {1, 1, 2}}, {{1, 0, 2}, {2, 1, 2}}};
  TruncationPolicy p;
  p.eps = 1e-4;
  Outcome o{true, ""};
  double worst_total = 0.0, worst_tail = 0.0;
  for (int k : {6, 8})
    for (const auto& [t, q] : pairs) {
      const KernelValue v = kernel(t, q, k, 1, p);
      worst_total = std::max(worst_total, std::abs(v.total));
      worst_tail = std::max(worst_tail, v.tail_bound);
      std::printf("    k=%d T=%s Q=%s total=%.3e rank1=%.6f rank2=%.6f tail=%.3e%s%s\n", k, t.str().c_str(),
                  q.str().c_str(), v.total, v.rank1, v.rank2, v.tail_bound, v.failed.empty() ? "" : " capped:",
                  v.failed.c_str());
      std::fflush(stdout);
      if (!(std::abs(v.total) <= 5e-3 && v.tail_bound <= 1e-4)) o.pass = false;
    }
  o.detail = "max|total|=" + fmt("%.3e", worst_total) + " (<=5e-3), max tail=" + fmt("%.3e", worst_tail) +
             " (<=1e-4)";
  return o;
}

Outcome weight_average() {
  Outcome o{true, ""};
  for (auto [k, tol] : {std::pair{10, 1e-4}, std::pair{20, 1e-8}}) {
    TruncationPolicy p;
    p.eps = tol / 10;
    const WeightAverage a = avg_weight(k, 1, p);
    std::printf("    k=%d avg=%.12f |avg-1|=%.3e tail=%.3e\n", k, a.value, std::abs(a.value - 1), a.tail);
    o.detail += "k=" + std::to_string(k) + ": |avg-1|=" + fmt("%.3e", std::abs(a.value - 1)) + " (<=" +
                fmt("%.0e", tol) + ") ";
    if (!(std::abs(a.value - 1) + a.tail <= tol)) o.pass = false;
  }
  return o;
}

std::vector<GOElement> go2_elements(Int max_det) {
  std::vector<GOElement> out;
  for (Int x = -5; x <= 5; ++x)
    for (Int y = -5; y <= 5; ++y)
      if (x * x + y * y > 0 && x * x + y * y <= max_det)
        for (bool r : {false, true}) out.emplace_back(x, y, r);
  return out;
}

Outcome curly_closed_form() {
  const auto cs = go2_elements(25);
  double worst = 0.0, worst_zero = 0.0;
  const KroneckerCharacter one(1);
  for (const auto& g : cs) {
    const double d2 = double(g.abs_det()) * double(g.abs_det());
    worst = std::max(worst, std::abs(curly_K(g, one, one) - curly_K_closed(g, one, one)) / d2);
    for (auto [a, b] : {std::pair<Int, Int>{-4, 5}, {5, 8}, {-3, 1}})
      worst_zero = std::max(worst_zero, std::abs(curly_K(g, KroneckerCharacter(a), KroneckerCharacter(b))) / d2);
  }
  return {worst <= 1e-8 && worst_zero <= 1e-8,
          std::to_string(cs.size()) + " matrices; max|direct-closed|/det^2=" + fmt("%.2e", worst) +
              ", max|twisted|/det^2=" + fmt("%.2e", worst_zero) + " (<=1e-8)"};
}

Outcome coset_oracle() {
  std::vector<IntMatrix2> cs;
  for (Int e1 = 1; e1 <= 12; ++e1)
    for (Int e2 = e1; e1 * e2 <= 12; e2 += e1) cs.push_back(make_matrix(e1, 0, 0, e2));
  for (const auto& g : go2_elements(12)) cs.push_back(g.matrix());
  std::size_t bad = 0, reps = 0;
  for (const auto& c : cs) {
    const CosetFamily fam = enumerate_XC(c);
    reps += fam.size();
    if (canonical_pairs(fam) != canonical_pairs(brute_force_XC(c, std::abs(det(c))))) {
      ++bad;
      std::printf("    mismatch at C=%s\n", format_matrix(c).c_str());
    }
  }
  return {bad == 0, std::to_string(cs.size()) + " matrices, " + std::to_string(reps) + " cosets, " +
                        std::to_string(bad) + " mismatches"};
}

// 2 Re(e(-(k+1)/4) int_0^inf e((a+b) z + g/z) J_k(4 pi sqrt(ab) z) dz/z).
double product_formula_lhs(int k, double a, double b, double g) {
  const Complex i(0, 1);
  const double c = 4 * kPi * std::sqrt(a * b);
  const BesselOrder nu(2 * k);
  auto e = [&](Complex x) { return std::exp(2 * kPi * i * x); };
  // Below z0 the integrand is under (c z0 / 2)^k / k!.
  double z0 = 1.0;
  while (std::pow(c * z0 / 2, k) / std::exp(gamma_ln(k + 1.0)) > 1e-17) z0 *= 0.8;
  // [z0, 1] in w = 1/z, where the phase g w is linear.
  const double wmax = 1 / z0;
  Complex sum = 0.0;
  const int order = 20;
  const auto panels_w = static_cast<int>(std::ceil((wmax - 1) * (g + a + b + 1) * 2));
  for (int part = 0; part < 2; ++part) {
    auto fr = [&](double w) {
      const Complex v = e((a + b) / w + g * w) * besselJ(nu, c / w) / w;
      return part == 0 ? v.real() : v.imag();
    };
    sum += (part == 0 ? 1.0 : 0.0) * integrate_panels(fr, 1.0, wmax, panels_w, order) +
           (part == 1 ? i : 0.0) * integrate_panels(fr, 1.0, wmax, panels_w, order);
  }
  // [1, Z] directly.
  const double zmax = 400.0;
  const auto panels_z = static_cast<int>(std::ceil((zmax - 1) * (2 * kPi * (a + b) + c) / 4));
  for (int part = 0; part < 2; ++part) {
    auto fr = [&](double z) {
      const Complex v = e((a + b) * z + g / z) * besselJ(nu, c * z) / z;
      return part == 0 ? v.real() : v.imag();
    };
    sum += (part == 0 ? 1.0 : 0.0) * integrate_panels(fr, 1.0, zmax, panels_z, order) +
           (part == 1 ? i : 0.0) * integrate_panels(fr, 1.0, zmax, panels_z, order);
  }
  // [Z, inf): J from its Hankel expansion, split into the two exponentials
  // e^{+-i c z}; each oscillating piece is integrated along z = Z + i t, the
  // non-oscillating one (a = b) along z = Z / v^2.
  const double nu_d = k;
  // Hankel series of J_k(c z) with the factor e^{+-i c z} left out.
  auto hankel_part = [&](Complex z, int sign) {
    const double mu = 4 * nu_d * nu_d;
    Complex s = 1.0, term = 1.0;
    for (int m = 1; m < 30; ++m) {
      const double q = (mu - double((2 * m - 1) * (2 * m - 1))) / (8.0 * m);
      term *= double(sign) * i * q / (c * z);
      if (std::abs(term) < 1e-18) break;
      s += term;
    }
    const double w0 = -nu_d * kPi / 2 - kPi / 4;
    return std::sqrt(2.0 / (kPi * c * z)) * 0.5 * std::exp(double(sign) * i * w0) * s;
  };
  const QuadratureRule de = double_exponential(80, 0.05, 0.0, 1.0);
  for (int sign : {1, -1}) {
    const double lambda = 2 * kPi * (a + b) + sign * c;
    auto f = [&](Complex z) { return std::exp(i * lambda * z) * e(g / z) * hankel_part(z, sign) / z; };
    if (lambda > 1e-12) {
      // t in [0, inf) mapped from u in [0, 1) by t = u / (1 - u).
      Complex s = 0.0;
      for (Eigen::Index j = 0; j < de.size(); ++j) {
        const double u = de.nodes[j];
        if (u >= 1.0) continue;
        const double t = u / (1 - u);
        s += de.weights[j] * f(Complex(zmax, t)) * i / ((1 - u) * (1 - u));
      }
      sum += s;
    } else {
      Complex s = 0.0;
      for (Eigen::Index j = 0; j < de.size(); ++j) {
        const double v = de.nodes[j];
        if (v <= 0.0) continue;
        s += de.weights[j] * f(Complex(zmax / (v * v), 0.0)) * (2 * zmax / (v * v * v));
      }
      sum += s;
    }
  }
  return 2 * (e(-(k + 1) / 4.0) * sum).real();
}

Outcome special_functions() {
  Outcome o{true, ""};
  // Mellin transform of J_k(1/x)^2, as int_0^inf J_k(u)^2 u^{-s-1} du.
  double worst_mellin = 0.0;
  const int k = 10;
  const BesselOrder nu(2 * k);
  for (double s : {0.5, 1.0, 1.5}) {
    const double umax = 20000.0;
    double v = integrate_panels([&](double u) { double j = besselJ(nu, u); return j * j * std::pow(u, -s - 1); },
                                0.0, 40.0, 80, 20);
    v += integrate_panels([&](double u) { double j = besselJ(nu, u); return j * j * std::pow(u, -s - 1); }, 40.0,
                          umax, 40000, 12);
    // Beyond umax: J^2 averages to (1 + (4 nu^2 - 1) / (8 u^2)) / (pi u) up to
    // oscillating terms of size u^{-s-2}.
    const double mu = 4.0 * k * k;
    v += std::pow(umax, -s - 1) / (kPi * (s + 1)) + (mu - 1) / 8 * std::pow(umax, -s - 3) / (kPi * (s + 3));
    const double exact = std::exp(gamma_ln(k - s / 2) + gamma_ln((1 + s) / 2) - gamma_ln(1 + k + s / 2) -
                                  gamma_ln(1 + s / 2)) /
                         (2 * std::sqrt(kPi));
    std::printf("    mellin s=%.1f quad=%.12e closed=%.12e\n", s, v, exact);
    worst_mellin = std::isfinite(v) ? std::max(worst_mellin, std::abs(v - exact)) : INFINITY;
  }
  double worst_product = 0.0;
  for (int kk : {8, 12})
    for (auto [a, b, g] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{2.0, 1.0, 0.5}, std::tuple{0.3, 0.7, 1.2}}) {
      const BesselOrder n(2 * kk);
      const double lhs = product_formula_lhs(kk, a, b, g);
      const double rhs = 2 * kPi * besselJ(n, 4 * kPi * std::sqrt(a * g)) * besselJ(n, 4 * kPi * std::sqrt(b * g));
      std::printf("    product k=%d (%.1f,%.1f,%.1f) lhs=%.10e rhs=%.10e\n", kk, a, b, g, lhs, rhs);
      worst_product = std::isfinite(lhs) ? std::max(worst_product, std::abs(lhs - rhs)) : INFINITY;
    }
  double worst_diff = 0.0;
  std::mt19937 rng(20240607);
  std::uniform_real_distribution<double> ux(0.1, 60.0);
  std::uniform_int_distribution<int> un(2, 40);
  for (int j = 0; j < 200; ++j) {
    const int two_nu = un(rng);
    const double x = ux(rng), h = 1e-4;
    const BesselOrder n(two_nu);
    const double fd = (besselJ(n, x + h) - besselJ(n, x - h)) / (2 * h);
    const double rule = 0.5 * (besselJ(BesselOrder(two_nu - 2), x) - besselJ(BesselOrder(two_nu + 2), x));
    worst_diff = std::max(worst_diff, std::abs(fd - rule));
  }
  o.pass = worst_mellin <= 1e-8 && worst_product <= 1e-6 && worst_diff <= 1e-6;  // NaN fails
  o.detail = "mellin " + fmt("%.2e", worst_mellin) + " (<=1e-8), product " + fmt("%.2e", worst_product) +
             " (<=1e-6), derivative " + fmt("%.2e", worst_diff) + " (<=1e-6)";
  return o;
}

Outcome main_terms() {
  const double l4 = L1_chi_minus4();
  const double l5 = dirichlet_L(5, 1.0).real(), l20 = dirichlet_L(-20, 1.0).real(),
               l8 = dirichlet_L(8, 1.0).real(), l32 = dirichlet_L(-32, 1.0).real(),
               l40 = dirichlet_L(40, 1.0).real();
  double worst = 0.0;
  for (int k : {10, 20, 40}) {
    const auto a1 = second_moment_main({k, KroneckerCharacter(1), KroneckerCharacter(1), 1});
    const auto a2 = second_moment_main({k, KroneckerCharacter(1), KroneckerCharacter(-4), 1});
    const auto a3 = second_moment_main({k, KroneckerCharacter(5), KroneckerCharacter(8), 1});
    const double r1 = a1.log_coefficients[3] / (4.0 / 3.0 * l4 * l4) - 1;
    const double r2 = a2.log_coefficients[2] / (2 * l4 * l4 * l4) - 1;
    const double r3 = a3.value / (4 * l5 * l20 * l8 * l32 * l40) - 1;
    std::printf("    k=%d rel: a1 %.2e a2 %.2e a3 %.2e\n", k, r1, r2, r3);
    worst = std::max({worst, std::abs(r1), std::abs(r2), std::abs(r3)});
  }
  return {worst <= 1e-6, "max relative deviation " + fmt("%.2e", worst) + " (<=1e-6)"};
}

Outcome first_moment_trend() {
  std::vector<int> ks;
  for (int k = 10; k <= 40; k += 2) ks.push_back(k);
  std::vector<double> scaled, tails;
  bool certified = true;
  for (int k : ks) {
    const auto t0 = std::chrono::steady_clock::now();
    const MomentReport r = first_moment_geometric(k, KroneckerCharacter(1), 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("    k=%d geometric=%.10f main=%.10f residual=%.3e residual*k=%.4f tail=%.2e kernels=%zu %.0fs\n", k,
                r.geometric, r.main, r.residual, r.residual * k, r.tail, r.kernels, secs);
    std::fflush(stdout);
    scaled.push_back(std::abs(r.residual) * k);
    tails.push_back(r.tail * k);
    certified = certified && r.tail * k < 1e-2;
  }
  // Bounded by a fixed constant; non-increasing on k >= 26 up to the tails.
  constexpr double kBound = 3.0;
  bool bounded = true, monotone = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    bounded = bounded && scaled[i] + tails[i] <= kBound;
    if (i > 0 && ks[i - 1] >= 26) monotone = monotone && scaled[i] <= scaled[i - 1] + tails[i] + tails[i - 1];
  }
  return {bounded && monotone,
          "max |residual|*k=" + fmt("%.4f", *std::max_element(scaled.begin(), scaled.end())) + " (<=3), " +
              (monotone ? "non-increasing" : "not monotone") + " on k>=26" +
              (certified ? "" : ", some k tails*k >= 1e-2")};
}

Outcome level_trend() {
  const std::vector<Int> Ns = {7, 11, 19, 23, 31};
  std::vector<double> res, tails;
  for (Int N : Ns) {
    const auto t0 = std::chrono::steady_clock::now();
    const MomentReport r = first_moment_geometric(10, KroneckerCharacter(1), N);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("    N=%lld geometric=%.10f main=%.10f residual=%.3e residual*N=%.4f tail=%.2e %.0fs\n",
                static_cast<long long>(N), r.geometric, r.main, r.residual, r.residual * double(N), r.tail, secs);
    std::fflush(stdout);
    res.push_back(std::abs(r.residual));
    tails.push_back(r.tail);
  }
  constexpr double kBound = 10.0;
  bool decreasing = true, bounded = true;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    bounded = bounded && (res[i] + tails[i]) * double(Ns[i]) <= kBound;
    if (i > 0) decreasing = decreasing && res[i] < res[i - 1] + tails[i] + tails[i - 1];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < Ns.size(); ++i) worst = std::max(worst, res[i] * double(Ns[i]));
  return {decreasing && bounded, std::string(decreasing ? "decreasing" : "not decreasing") +
                                     ", max |residual|*N=" + fmt("%.4f", worst) + " (<=10)"};
}

Outcome gram_structure() {
  // One-dimensional space at this weight (external fact: the cusp forms of
  // weight 10 and degree 2 are spanned by a single form).
  const std::vector<HalfIntegralForm> ts = {{1, 0, 1}, {1, 1, 1}, {1, 0, 2}};
  TruncationPolicy p;
  p.eps = 1e-6;
  Eigen::MatrixXd tails;
  const Eigen::MatrixXd g = gram(ts, 10, 1, p, &tails);
  const double scale = g.cwiseAbs().maxCoeff();
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
  const double min_eig = es.eigenvalues().minCoeff();
  double minor = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          minor = std::max(minor, std::abs(g(i, a) * g(j, b) - g(i, b) * g(j, a)));
  for (int i = 0; i < 3; ++i)
    std::printf("    [%14.8f %14.8f %14.8f]  tails %.1e %.1e %.1e\n", g(i, 0), g(i, 1), g(i, 2), tails(i, 0),
                tails(i, 1), tails(i, 2));
  std::printf("    eigenvalues %.6e %.6e %.6e\n", es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]);
  const bool pass = asym <= 1e-6 && min_eig >= -1e-6 && minor <= 1e-6 * scale * scale;
  return {pass, "asymmetry " + fmt("%.2e", asym) + ", min eigenvalue " + fmt("%.3e", min_eig) +
                    ", max 2x2 minor/scale^2 " + fmt("%.2e", minor / (scale * scale)) + " (<=1e-6)"};
}

Outcome diagonal_consistency() {
  MomentPolicy p;
  p.diagonal_only = true;
  const MomentReport r = second_moment_geometric(12, KroneckerCharacter(1), KroneckerCharacter(1), 1, p);
  const MellinValue m = second_moment_diagonal_mellin(12, KroneckerCharacter(1), KroneckerCharacter(1));
  const double diff = std::abs(r.diagonal - m.value);
  const double tol = r.sum_tail + m.truncation + 1e-12;
  std::printf("    diagonal sum=%.14f (tail %.2e), double integral=%.14f (truncation %.2e)\n", r.diagonal,
              r.sum_tail, m.value, m.truncation);
  return {diff <= tol, "difference " + fmt("%.2e", diff) + " vs tails " + fmt("%.2e", tol)};
}

Outcome psi_decay() {
  const KroneckerCharacter one(1);
  const PsiValue base = eval_Psi(IntMatrix2::Identity(), 0, 0, 1, 1, one, one, 16);
  const PsiValue shifted = eval_Psi(IntMatrix2::Identity(), 1, 0, 1, 1, one, one, 16);
  const PsiValue split = eval_Psi(make_matrix(1, 0, 0, 2), 0, 0, 1, 1, one, one, 16);
  const double b = std::abs(base.value), s = std::abs(shifted.value), d = std::abs(split.value);
  std::printf("    |Psi(I;0,0)|=%.6e +- %.1e, |Psi(I;1,0)|=%.6e +- %.1e, |Psi(diag(1,2);0,0)|=%.6e +- %.1e\n", b,
              base.error, s, shifted.error, d, split.error);
  const bool separated = s + shifted.error < b - base.error && d + split.error < b - base.error;
  const bool pass = 2 * (s + shifted.error) <= b - base.error && 2 * (d + split.error) <= b - base.error;
  return {pass, "ratios " + fmt("%.1f", b / s) + " and " + fmt("%.1f", b / d) + " (>=2)" +
                    (separated ? "" : ", error bars overlap (report-only)")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"zero-space vanishing (k=6,8)", zero_space},
      {"weight average", weight_average},
      {"twisted GO2 sum closed form", curly_closed_form},
      {"coset enumeration oracle", coset_oracle},
      {"special-function identities", special_functions},
      {"second-moment main term closed forms", main_terms},
      {"first-moment residual trend in k", first_moment_trend},
      {"level-aspect residual trend", level_trend},
      {"Gram structure at k=10", gram_structure},
      {"second-moment diagonal consistency", diagonal_consistency},
      {"Psi decay", psi_decay},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    std::printf("[%d] %s\n", id, criteria[i].first);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.0fs)\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "brute_force.hpp"
#include "pwdg/harness.hpp"
#include "pwdg/oracles.hpp"

using namespace pwdg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

Eigen::VectorXcd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

std::shared_ptr<DiscreteSolution> as_solution(const Mesh& m, int p, double k, const Eigen::VectorXcd& x) {
  auto mesh = std::make_shared<const Mesh>(m);
  auto space = std::make_shared<const PlaneWaveSpace>(p, k, element_wavenumbers(m, k));
  return std::make_shared<DiscreteSolution>(mesh, space, DofLayout(m, p), x);
}

Mesh two_layer_mesh(cplx eps2, double h) {
  RunConfig cfg;
  cfg.eps2 = eps2;
  return generate_periodic_mesh(scenario_interfaces(cfg), h);
}

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

// Largest entry difference relative to the largest reference entry.
double rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& ref) {
  return (a - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  int checked = 0;
  auto record = [&](const LinearSystem& sys, const brute::System& ref) {
    worst = std::max(worst, rel_diff(Eigen::MatrixXcd(sys.A), ref.A));
    worst = std::max(worst, rel_diff(sys.b, ref.b));
    ++checked;
  };
  {
    const Mesh m = fixed_eight_triangle_mesh();
    for (int p : {3, 8}) {
      const PlaneWaveSpace sp(p, 10.0, element_wavenumbers(m, 10.0));
      const auto g = impedance_data_from_exact([](const Vec2& x) { return circular_wave(x, 1.0, 10.0); });
      record(assemble_impedance(m, sp, FluxParams::uwvf(), {g, g, std::nullopt}, {20, {}}),
             brute::impedance(m, sp, FluxParams::uwvf(), g));
      const PlaneWaveField u{1.0, 10.0, Vec2(std::sqrt(0.5), std::sqrt(0.5))};
      const auto gu = impedance_data_from_exact(u);
      record(assemble_impedance(m, sp, FluxParams{0.8, 0.3, 0.2}, {gu, gu, u}),
             brute::impedance(m, sp, FluxParams{0.8, 0.3, 0.2}, gu));
    }
  }
  {
    const Mesh strip = two_layer_mesh(cplx(1.27, 0.05) * cplx(1.27, 0.05), 3.0);
    if (strip.num_elements() > 16) return {false, "coarse strip mesh has " + std::to_string(strip.num_elements()) + " elements"};
    const Mesh imp = strip.to_impedance();
    const double k = 5.0;
    for (int p : {3, 6}) {
      const PlaneWaveSpace sp(p, k, element_wavenumbers(strip, k));
      const auto c = two_layer_coefficients(k, -kPi / 3, cplx(1.27, 0.05) * cplx(1.27, 0.05), 3.0);
      const auto g = impedance_data_from_exact([&](const Vec2& x) { return two_layer_field(x, c); });
      record(assemble_impedance(imp, sp, FluxParams::uwvf(), {g, g, std::nullopt}, {20, {}}),
             brute::impedance(imp, sp, FluxParams::uwvf(), g));
      const IncidentWave inc{-kPi / 3, k, 1.0};
      const DtnSpec spec{10, k, 1.0, inc.alpha0(), 3.0};
      for (const FluxParams& f : {FluxParams::uwvf(), FluxParams{0.6, 0.45, 0.4}})
        record(assemble_dtn(strip, sp, f, inc, spec), brute::dtn(strip, sp, f, inc, spec));
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " systems, max rel diff " + fmt(worst)};
}

Outcome energy_identity() {
  const Mesh m = fixed_eight_triangle_mesh();
  const double k = 10.0;
  std::mt19937 rng(2024);
  double worst = 0.0;
  const BoundaryData zero = [](const Vec2&, const Vec2&, cplx) { return cplx(0); };
  for (int p : {3, 7}) {
    const PlaneWaveSpace sp(p, k, element_wavenumbers(m, k));
    const auto sys = assemble_impedance(m, sp, FluxParams::uwvf(), {zero, zero, std::nullopt});
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXcd w = random_vector(sys.layout.size(), rng);
      const double n2 = std::pow(tdg_norm(*as_solution(m, p, k, w), FluxParams::uwvf()), 2);
      worst = std::max(worst, std::abs(quadratic_form(sys.A, w).imag() + n2) / n2);
    }
  }
  return {worst <= 1e-10, "max |Im A(w,w) + |w|^2| / |w|^2 = " + fmt(worst)};
}

Outcome dtn_coercivity() {
  const double k = 5.0;
  const Mesh m = two_layer_mesh(1.5, 1.5);
  const IncidentWave inc{-kPi / 4, k, 1.0};
  const DtnSpec spec{100, k, 1.0, inc.alpha0(), 3.0};
  std::mt19937 rng(77);
  double worst = 1e300;
  for (int p : {3, 7}) {
    const PlaneWaveSpace sp(p, k, element_wavenumbers(m, k));
    const auto sys = assemble_dtn(m, sp, FluxParams::uwvf(), inc, spec);
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXcd w = random_vector(sys.layout.size(), rng);
      const double n2 = std::pow(tdg_t_norm(*as_solution(m, p, k, w), FluxParams::uwvf(), spec), 2);
      worst = std::min(worst, (-quadratic_form(sys.A, w).imag() - n2) / n2);
    }
  }
  return {worst >= -1e-10, "min relative slack " + fmt(worst)};
}

Outcome dtn_sign() {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  double worst = 1e300;
  for (int t = 0; t < 100; ++t) {
    DtnSpec s;
    s.M = 1 + static_cast<int>(40 * u(rng));
    s.k = 0.5 + 10 * u(rng);
    s.eps_plus = 0.5 + 3 * u(rng);
    s.alpha0 = s.k * std::sqrt(s.eps_plus.real()) * std::cos(-kPi * (0.01 + 0.98 * u(rng)));
    cplx sum = 0.0;
    double scale = 0.0;
    for (int n = -s.M; n <= s.M; ++n) {
      const double w2 = std::norm(cplx(g(rng), g(rng)));
      cplx b;
      try {
        b = mode_beta(n, s);
      } catch (const Error&) {
        continue;
      }
      sum += kTwoPi * w2 * b;
      scale += kTwoPi * w2 * std::abs(b);
    }
    worst = std::min(worst, sum.imag() / scale);
  }
  return {worst >= -1e-14, "min Im sum / scale = " + fmt(worst)};
}

Outcome plane_wave_exactness() {
  RunConfig c;
  c.method = Method::Impedance;
  c.scenario = Scenario::PlaneWave;
  c.k = 10.0;
  c.d_angle = kPi / 4;
  std::ostringstream d;
  bool ok = true;
  for (int p : {7, 8, 9, 16}) {
    c.p = p;
    const RunRecord r = run_single(c);
    const bool in_space = p % 8 == 0;
    ok = ok && r.error.empty() && (in_space ? r.l2_rel < 1e-8 : r.l2_rel > 1e-4);
    d << "p=" << p << ":" << fmt(r.l2_rel) << " ";
  }
  return {ok, d.str()};
}

Outcome circular_p_convergence() {
  std::ostringstream d;
  bool ok = true;
  for (double xi : {1.0, 2.0 / 3.0, 1.5}) {
    RunConfig c;
    c.method = Method::Impedance;
    c.scenario = Scenario::Circular;
    c.k = 10.0;
    c.xi = xi;
    c.p_values = range(3, 19);
    c.threads = threads();
    const auto rows = run_sweep(c, SweepKind::P);
    int stalls = 0;
    bool finite = true;
    for (size_t i = 0; i < rows.size(); ++i) {
      finite = finite && std::isfinite(rows[i].l2_rel);
      if (i > 0 && !(rows[i].l2_rel < rows[i - 1].l2_rel)) ++stalls;
    }
    const double drop = std::log10(rows.front().l2_rel / rows.back().l2_rel);
    const bool pass = finite && (xi == 1.0 ? (stalls <= 1 && drop >= 4.0) : drop >= 2.0);
    ok = ok && pass;
    d << "xi=" << fmt(xi) << ": drop " << fmt(drop) << " orders, " << stalls << " stalls; ";
  }
  return {ok, d.str()};
}

RunConfig lossy_two_layer() {
  RunConfig c;
  c.theta = -kPi / 3;
  c.eps2 = cplx(1.27, 0.05) * cplx(1.27, 0.05);
  c.h = 1.5;
  c.M = 100;
  c.threads = threads();
  return c;
}

Outcome two_layer_p_convergence() {
  RunConfig c = lossy_two_layer();
  c.p_values = range(3, 21);
  const auto rows = run_sweep(c, SweepKind::P);
  std::vector<double> x, y;
  double e15 = std::nan("");
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].l2_rel)) return {false, "p=" + rows[i].sweep + " failed: " + rows[i].error};
    x.push_back(c.p_values[i]);
    y.push_back(std::log(rows[i].l2_rel));
    if (c.p_values[i] == 15) e15 = rows[i].l2_rel;
  }
  const double s = slope(x, y);
  return {s < 0.0 && e15 < 1e-3, "log-error slope " + fmt(s) + " per p, error(p=15) " + fmt(e15) +
                                     ", error(p=21) " + fmt(rows.back().l2_rel)};
}

Outcome h_convergence() {
  RunConfig c = lossy_two_layer();
  c.p = 3;
  c.h_values = {1.5, 0.75, 0.375};
  const auto rows = run_sweep(c, SweepKind::H);
  std::vector<double> x, y;
  std::ostringstream d;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].l2_rel)) return {false, "h=" + rows[i].sweep + " failed: " + rows[i].error};
    x.push_back(std::log(c.h_values[i]));
    y.push_back(std::log(rows[i].l2_rel));
    d << "h=" << rows[i].sweep << ":" << fmt(rows[i].l2_rel) << " ";
  }
  const double order = slope(x, y);
  d << "order " << fmt(order);
  return {order >= 1.7, d.str()};
}

Outcome m_flattening() {
  RunConfig c = lossy_two_layer();
  c.p = 15;
  c.M_values = {5, 10, 25, 50, 100};
  const auto rows = run_sweep(c, SweepKind::M);
  std::ostringstream d;
  for (const auto& r : rows) {
    if (!std::isfinite(r.l2_rel)) return {false, "M=" + r.sweep + " failed: " + r.error};
    d << "M=" << r.sweep << ":" << fmt(r.l2_rel) << " ";
  }
  const double e50 = rows[3].l2_rel, e100 = rows[4].l2_rel;
  const double rel = std::abs(e100 - e50) / e50;
  d << "rel change " << fmt(rel);
  return {rel <= 0.05, d.str()};
}

Outcome method_comparison() {
  RunConfig a;
  a.theta = -kPi / 4;
  a.eps2 = cplx(1.8, 0.15) * cplx(1.8, 0.15);
  a.h = 1.5;
  a.M = 100;
  a.p_values = range(3, 21);
  RunConfig b = a;
  b.method = Method::Impedance;
  const auto rows = run_compare(a, b);
  std::ostringstream worse;
  int n_worse = 0;
  for (const auto& r : rows) {
    if (!r.a.error.empty() || !r.b.error.empty()) return {false, "p=" + std::to_string(r.p) + " failed"};
    if (!(r.a.l2_rel <= r.b.l2_rel)) {
      ++n_worse;
      worse << " p=" << r.p << "(" << fmt(r.a.l2_rel) << " vs " << fmt(r.b.l2_rel) << ")";
    }
  }
  return {n_worse == 0, std::to_string(n_worse) + " of " + std::to_string(rows.size()) +
                            " p values with DtN error above impedance error;" + worse.str()};
}

// Relative central-difference gradient error of f at x.
double fd_gradient_error(const FieldFn& f, const Vec2& x) {
  const double h = 1e-6;
  const FieldValue u = f(x);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    Vec2 e = Vec2::Zero();
    e(i) = h;
    const cplx fd = (f(x + e).value - f(x - e).value) / (2 * h);
    err = std::max(err, std::abs(fd - u.grad(i)) / std::max(1.0, std::abs(u.grad(i))));
  }
  return err;
}

Outcome oracle_consistency() {
  double res = 0.0, bes = 0.0, grad = 0.0;
  for (cplx eps2 : {cplx(1.5, 0), cplx(1.27, 0.05) * cplx(1.27, 0.05), cplx(1.8, 0.15) * cplx(1.8, 0.15),
                    cplx(1.27, 0.1) * cplx(1.27, 0.1)})
    for (double th : {-kPi / 3, -kPi / 4}) {
      const auto c = two_layer_coefficients(5.0, th, eps2, 3.0);
      res = std::max(res, two_layer_residual(c));
      for (Vec2 x : {Vec2(0.7, 1.3), Vec2(4.0, -2.1)})
        grad = std::max(grad, fd_gradient_error([&](const Vec2& y) { return two_layer_field(y, c); }, x));
    }
  for (double x : {0.05, 0.5, 2.0, 9.0, 33.0, 80.0}) {
    const double s = std::sqrt(2 / (kPi * x));
    bes = std::max(bes, std::abs(bessel_j(0.5, x) - s * std::sin(x)));
    bes = std::max(bes, std::abs(bessel_j(1.5, x) - s * (std::sin(x) / x - std::cos(x))));
    bes = std::max(bes, std::abs(bessel_j(2.5, x) - s * ((3 / (x * x) - 1) * std::sin(x) - 3 * std::cos(x) / x)));
  }
  for (double xi : {1.0, 2.0 / 3.0, 1.5})
    for (Vec2 x : {Vec2(0.3, 0.2), Vec2(0.9, -0.45)})
      grad = std::max(grad, fd_gradient_error([&](const Vec2& y) { return circular_wave(y, xi, 10.0); }, x));
  const IncidentWave inc{-kPi / 3, 5.0, 1.0};
  grad = std::max(grad, fd_gradient_error([&](const Vec2& y) { return inc(y); }, Vec2(1.0, 2.0)));
  return {res < 1e-12 && bes < 1e-10 && grad < 1e-6,
          "residual " + fmt(res) + ", bessel " + fmt(bes) + ", gradient " + fmt(grad)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"closed-form vs quadrature assembly", 10, oracle_equivalence},
      {"impedance energy identity", 5, energy_identity},
      {"DtN coercivity", 10, dtn_coercivity},
      {"DtN sign lemma", 1, dtn_sign},
      {"plane-wave exactness", 10, plane_wave_exactness},
      {"circular-wave p-convergence", 60, circular_p_convergence},
      {"two-layer DtN p-convergence", 120, two_layer_p_convergence},
      {"h-convergence order", 120, h_convergence},
      {"Fourier-mode flattening", 120, m_flattening},
      {"DtN vs impedance comparison", 180, method_comparison},
      {"oracle self-consistency", 5, oracle_consistency},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.name << " | " << o.detail << " | " << fmt(s) << " s"
              << (in_time ? "" : " (limit " + fmt(c.limit_s) + " s)") << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

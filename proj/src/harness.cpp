#include "pwdg/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pwdg/oracles.hpp"

namespace pwdg {

InterfaceSpec scenario_interfaces(const RunConfig& cfg) {
  InterfaceSpec spec;
  spec.H = cfg.H;
  const double P = kTwoPi;
  auto flat = [&](double y) { return std::vector<Vec2>{{0.0, y}, {P, y}}; };
  auto eps_or = [&](int region, cplx fallback) {
    auto it = cfg.region_eps.find(region);
    return it == cfg.region_eps.end() ? fallback : it->second;
  };
  switch (cfg.scenario) {
    case Scenario::TwoLayer:
      spec.open_polylines = {flat(0.0)};
      spec.region_eps = {{0, cfg.eps_plus}, {1, cfg.eps2}};
      break;
    case Scenario::GratingStep:
      // step: x2 = 1/2 over (π/2, 3π/2), -1/2 elsewhere
      spec.open_polylines = {{{0.0, -0.5}, {P / 4, -0.5}, {P / 4, 0.5}, {3 * P / 4, 0.5},
                              {3 * P / 4, -0.5}, {P, -0.5}}};
      spec.region_eps = {{0, eps_or(0, cfg.eps_plus)}, {1, eps_or(1, cfg.eps2)}};
      break;
    case Scenario::GratingLayers:
      spec.open_polylines = {{{0.0, 1.0}, {P / 4, 1.0}, {P / 4, 1.5}, {3 * P / 4, 1.5},
                              {3 * P / 4, 1.0}, {P, 1.0}},
                             flat(0.5), flat(0.0), flat(-1.0)};
      spec.region_eps = {{0, eps_or(0, cfg.eps_plus)},
                         {1, eps_or(1, 1.49 * 1.49)},
                         {2, eps_or(2, 2.13 * 2.13)},
                         {3, eps_or(3, 2.02 * 2.02)},
                         {4, eps_or(4, 1.453 * 1.453)}};
      break;
    default:
      throw Error(ErrorKind::ConfigError, "scenario has no interface description");
  }
  return spec;
}

Mesh build_mesh(const RunConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::Circular:
    case Scenario::PlaneWave: {
      // unit square split into n×n squares, h = sqrt(2)/n; the default h gives 8 triangles
      const int n = std::max(2, static_cast<int>(std::ceil(std::sqrt(2.0) / cfg.h - 1e-9)));
      return rectangle_mesh(0.0, 1.0, -0.5, 0.5, n, n);
    }
    case Scenario::Custom: {
      std::ifstream f(cfg.mesh_file);
      if (!f) throw Error(ErrorKind::ConfigError, "cannot open mesh file '" + cfg.mesh_file + "'");
      std::map<int, cplx> eps = cfg.region_eps;
      if (!eps.count(0)) eps[0] = cfg.eps_plus;
      Mesh m = read_mesh(f, eps);
      if (m.mode() != BoundaryMode::Strip) throw Error(ErrorKind::ConfigError, "custom mesh must be a strip mesh");
      return m;
    }
    default: {
      Mesh m = generate_periodic_mesh(scenario_interfaces(cfg), cfg.h);
      return cfg.method == Method::Impedance ? m.to_impedance() : m;
    }
  }
}

Problem build_problem(const RunConfig& cfg) {
  validate_config(cfg);
  Problem pr;
  auto mesh = std::make_shared<Mesh>(build_mesh(cfg));
  pr.mesh = mesh;
  auto space = std::make_shared<PlaneWaveSpace>(cfg.p, cfg.k, element_wavenumbers(*mesh, cfg.k));
  pr.space = space;
  AssemblyOptions ao;
  ao.gl_points = cfg.gl_points;

  switch (cfg.scenario) {
    case Scenario::Circular: {
      const double xi = cfg.xi, k = cfg.k;
      pr.exact = [xi, k](const Vec2& x) { return circular_wave(x, xi, k); };
      break;
    }
    case Scenario::PlaneWave: {
      PlaneWaveField pw{1.0, cfg.k, Vec2(std::cos(cfg.d_angle), std::sin(cfg.d_angle))};
      pr.exact = pw;
      break;
    }
    case Scenario::TwoLayer: {
      if (cfg.eps_plus != 1.0)
        throw Error(ErrorKind::ConfigError, "two-layer oracle assumes eps_plus = 1");
      const TwoLayerCoefficients c = two_layer_coefficients(cfg.k, cfg.theta, cfg.eps2, cfg.H);
      pr.exact = [c](const Vec2& x) { return two_layer_field(x, c); };
      break;
    }
    default:
      break;
  }

  if (cfg.method == Method::Impedance) {
    ImpedanceData data;
    if (cfg.scenario == Scenario::PlaneWave) {
      data.plane_wave = PlaneWaveField{1.0, cfg.k, Vec2(std::cos(cfg.d_angle), std::sin(cfg.d_angle))};
    } else {
      data.robin = impedance_data_from_exact(*pr.exact);
    }
    pr.system = assemble_impedance(*mesh, *space, cfg.flux, data, ao);
  } else {
    IncidentWave inc{cfg.theta, cfg.k, cfg.eps_plus};
    pr.alpha0 = inc.alpha0();
    pr.dtn = DtnSpec{cfg.M, cfg.k, cfg.eps_plus, inc.alpha0(), mesh->H()};
    if (std::abs(mesh->eps(mesh->face(mesh->faces_with_tag(FaceTag::TopDtN).front()).owner) - cplx(cfg.eps_plus)) > 1e-12)
      pr.system.warnings.push_back("top region permittivity differs from eps_plus");
    auto warnings = pr.system.warnings;
    pr.system = assemble_dtn(*mesh, *space, cfg.flux, inc, pr.dtn, ao);
    pr.system.warnings.insert(pr.system.warnings.begin(), warnings.begin(), warnings.end());
  }
  return pr;
}

RunRecord run_single(const RunConfig& cfg, const RunOutputs& out) {
  RunRecord rec;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Problem pr = build_problem(cfg);
    rec.h = pr.mesh->h();
    if (out.mesh_dump) write_mesh(*out.mesh_dump, *pr.mesh);
    if (out.matrix_dump) write_matrix(*out.matrix_dump, pr.system.A);
    rec.N = pr.system.layout.size();
    rec.warnings = pr.system.warnings;
    const SolveResult sr = solve(pr.system);
    rec.residual = sr.residual;
    if (sr.condition) rec.cond = *sr.condition;
    rec.conditioning_warning = sr.conditioning_warning;
    if (sr.conditioning_warning) rec.warnings.push_back("ill-conditioned system");
    auto sol = std::make_shared<DiscreteSolution>(pr.mesh, pr.space, pr.system.layout, sr.x);
    if (pr.exact) {
      const ErrorReport er = error_norms(*sol, *pr.exact, cfg.quad_order);
      rec.l2_rel = er.l2_rel;
      rec.h1_rel = er.h1_rel;
      rec.h1_semi_rel = er.h1_semi_rel;
    }
    if (out.solution) *out.solution = sol;
  } catch (const Error& e) {
    rec.error = e.what();
    const auto k = e.kind();
    rec.exit_class = (k == ErrorKind::ConfigError || k == ErrorKind::InvalidArgument ||
                      k == ErrorKind::IoError || k == ErrorKind::InterfaceCrossing)
                         ? 2
                         : 3;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.exit_class = 3;
  }
  if (cfg.timing)
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

}  // namespace

std::vector<RunRecord> run_sweep(const RunConfig& cfg, SweepKind kind) {
  validate_config(cfg);
  std::vector<RunConfig> points;
  std::vector<std::string> labels;
  switch (kind) {
    case SweepKind::P: {
      const auto vals = cfg.p_values.empty() ? std::vector<int>{cfg.p} : cfg.p_values;
      for (int v : vals) {
        RunConfig c = cfg;
        c.p = v;
        points.push_back(c);
        labels.push_back(std::to_string(v));
      }
      break;
    }
    case SweepKind::H: {
      const auto vals = cfg.h_values.empty() ? std::vector<double>{cfg.h} : cfg.h_values;
      for (double v : vals) {
        RunConfig c = cfg;
        c.h = v;
        points.push_back(c);
        labels.push_back(format_value(v));
      }
      break;
    }
    case SweepKind::M: {
      const auto vals = cfg.M_values.empty() ? std::vector<int>{cfg.M} : cfg.M_values;
      for (int v : vals) {
        RunConfig c = cfg;
        c.M = v;
        points.push_back(c);
        labels.push_back(std::to_string(v));
      }
      break;
    }
  }
  std::vector<RunRecord> rows(points.size());
  const size_t workers = static_cast<size_t>(cfg.threads);
  for (size_t start = 0; start < points.size(); start += workers) {
    std::vector<std::future<RunRecord>> jobs;
    for (size_t i = start; i < std::min(points.size(), start + workers); ++i)
      jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                [&points, i] { return run_single(points[i]); }));
    for (size_t i = 0; i < jobs.size(); ++i) {
      rows[start + i] = jobs[i].get();
      rows[start + i].sweep = labels[start + i];
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<RunRecord>& rows) {
  os << "sweep,N,l2_rel,h1_rel,residual,cond,seconds\n";
  os << std::setprecision(10);
  for (const auto& r : rows)
    os << r.sweep << ',' << r.N << ',' << r.l2_rel << ',' << r.h1_rel << ',' << r.residual << ','
       << r.cond << ',' << r.seconds << '\n';
}

std::vector<CompareRow> run_compare(const RunConfig& a, const RunConfig& b) {
  validate_config(a);
  validate_config(b);
  if (a.scenario != b.scenario || a.k != b.k || a.theta != b.theta || a.eps_plus != b.eps_plus ||
      a.H != b.H || a.eps2 != b.eps2 || a.xi != b.xi || a.d_angle != b.d_angle || a.h != b.h ||
      a.region_eps != b.region_eps || a.mesh_file != b.mesh_file || a.p_values != b.p_values)
    throw Error(ErrorKind::ConfigError, "compared configurations must describe the same problem and p values");
  const auto ps = a.p_values.empty() ? std::vector<int>{a.p} : a.p_values;
  std::vector<CompareRow> rows;
  for (int p : ps) {
    RunConfig ca = a, cb = b;
    ca.p = cb.p = p;
    rows.push_back({p, run_single(ca), run_single(cb)});
  }
  return rows;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << "p,l2_rel_a,h1_rel_a,l2_rel_b,h1_rel_b\n";
  os << std::setprecision(10);
  for (const auto& r : rows)
    os << r.p << ',' << r.a.l2_rel << ',' << r.a.h1_rel << ',' << r.b.l2_rel << ',' << r.b.h1_rel << '\n';
}

void run_field_dump(const RunConfig& cfg, const FieldDumpOptions& opts, const std::string& prefix) {
  if (opts.nx < 2 || opts.ny < 2) throw Error(ErrorKind::ConfigError, "grid needs at least 2x2 points");
  if (opts.extend < 0) throw Error(ErrorKind::ConfigError, "extend must be >= 0");
  auto solve_at = [&](int p) {
    RunConfig c = cfg;
    c.p = p;
    std::shared_ptr<DiscreteSolution> sol;
    RunOutputs out;
    out.solution = &sol;
    const RunRecord rec = run_single(c, out);
    if (!rec.error.empty())
      throw Error(rec.exit_class == 2 ? ErrorKind::ConfigError : ErrorKind::SingularMatrix, rec.error);
    return sol;
  };
  const auto sol = solve_at(cfg.p);
  std::shared_ptr<DiscreteSolution> other;
  if (opts.diff_p) other = solve_at(*opts.diff_p);

  double xlo, xhi, ylo, yhi;
  std::function<cplx(const Vec2&)> f, g;  // g: second solution when diff_p is set
  if (cfg.method == Method::Dtn) {
    const double a0 = IncidentWave{cfg.theta, cfg.k, cfg.eps_plus}.alpha0();
    xlo = -kTwoPi * opts.extend;
    xhi = kTwoPi * (opts.extend + 1);
    ylo = -sol->mesh().H();
    yhi = sol->mesh().H();
    f = [s = QuasiPeriodicSampler(*sol, a0, -opts.extend, opts.extend)](const Vec2& x) { return s(x).value; };
    if (other)
      g = [s = QuasiPeriodicSampler(*other, a0, -opts.extend, opts.extend)](const Vec2& x) { return s(x).value; };
  } else {
    xlo = ylo = 1e300;
    xhi = yhi = -1e300;
    for (const auto& v : sol->mesh().vertices()) {
      xlo = std::min(xlo, v.x());
      xhi = std::max(xhi, v.x());
      ylo = std::min(ylo, v.y());
      yhi = std::max(yhi, v.y());
    }
    f = [sol](const Vec2& x) { return sol->evaluate(x).value; };
    if (other) g = [other](const Vec2& x) { return other->evaluate(x).value; };
  }
  auto write_set = [&](const std::string& pre, const std::vector<GridSample>& samples) {
    auto open = [&](const std::string& suffix) {
      std::ofstream os(pre + suffix);
      if (!os) throw Error(ErrorKind::IoError, "cannot write " + pre + suffix);
      os << std::setprecision(17);
      return os;
    };
    {
      auto os = open("_field.txt");
      write_field(os, samples);
    }
    const char* names[3] = {"_re.txt", "_im.txt", "_abs.txt"};
    for (int c = 0; c < 3; ++c) {
      auto os = open(names[c]);
      for (const auto& s : samples) {
        const double v = c == 0 ? s.value.real() : c == 1 ? s.value.imag() : std::abs(s.value);
        os << s.x1 << ' ' << s.x2 << ' ' << v << '\n';
      }
    }
  };
  const auto a = sample_grid(f, xlo, xhi, ylo, yhi, opts.nx, opts.ny);
  write_set(prefix, a);
  if (other) {
    const auto b = sample_grid(g, xlo, xhi, ylo, yhi, opts.nx, opts.ny);
    write_set(prefix + "_p" + std::to_string(*opts.diff_p), b);
    std::vector<GridSample> d = a;
    for (size_t i = 0; i < d.size(); ++i) d[i].value -= b[i].value;
    write_set(prefix + "_diff", d);
  }
}

}  // namespace pwdg

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pwdg/harness.hpp"

using namespace pwdg;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
};

RunConfig load(const Common& c, RunConfig base = {}) {
  RunConfig cfg = c.config.empty() ? base : load_config(c.config, base);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set expects key=value");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  validate_config(cfg);
  return cfg;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  return file;
}

int report(const std::vector<RunRecord>& rows) {
  int code = 0;
  for (const auto& r : rows) {
    for (const auto& w : r.warnings) std::cerr << "warning [" << r.sweep << "]: " << w << '\n';
    if (!r.error.empty()) {
      std::cerr << "error [" << r.sweep << "]: " << r.error << '\n';
      code = std::max(code, r.exit_class);
    }
  }
  return code;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value configuration file");
  sub->add_option("--out", c.out, "output file (stdout when omitted)");
  sub->add_option("--set", c.sets, "override a configuration key (key=value)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane-wave DG solver for periodic Helmholtz gratings"};
  app.require_subcommand(1);
  Common c;
  std::string mesh_dump, matrix_dump;
  std::vector<int> grid{200, 100};
  int extend = 0;
  int diff_p = -1;
  std::string config_b;
  std::vector<std::string> sets_b;

  auto* solve_cmd = app.add_subcommand("solve", "single run");
  add_common(solve_cmd, c);
  solve_cmd->add_option("--mesh-dump", mesh_dump, "write the mesh to this file");
  solve_cmd->add_option("--matrix-dump", matrix_dump, "write the system matrix to this file");
  auto* sp = app.add_subcommand("sweep-p", "sweep over p_values");
  auto* sh = app.add_subcommand("sweep-h", "sweep over h_values");
  auto* sm = app.add_subcommand("sweep-m", "sweep over M_values");
  for (auto* s : {sp, sh, sm}) add_common(s, c);
  auto* cmp = app.add_subcommand("compare", "two configurations side by side over p_values");
  add_common(cmp, c);
  cmp->add_option("--config-b", config_b, "second configuration (default: same with method = impedance)");
  cmp->add_option("--set-b", sets_b, "override for the second configuration");
  auto* fld = app.add_subcommand("field", "sample the field on a grid");
  add_common(fld, c);
  fld->add_option("--grid", grid, "grid points NX NY")->expected(2);
  fld->add_option("--extend", extend, "quasi-periodic copies on each side");
  fld->add_option("--diff-p", diff_p, "also dump the solution with this p and the difference");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ofstream file;
    if (*solve_cmd) {
      const RunConfig cfg = load(c);
      std::ofstream mf, xf;
      RunOutputs out;
      if (!mesh_dump.empty()) out.mesh_dump = &output(mesh_dump, mf);
      if (!matrix_dump.empty()) out.matrix_dump = &output(matrix_dump, xf);
      RunRecord r = run_single(cfg, out);
      r.sweep = std::to_string(cfg.p);
      write_sweep_csv(output(c.out, file), {r});
      return report({r});
    }
    for (auto [cmd, kind] : {std::pair{sp, SweepKind::P}, {sh, SweepKind::H}, {sm, SweepKind::M}}) {
      if (!*cmd) continue;
      const auto rows = run_sweep(load(c), kind);
      write_sweep_csv(output(c.out, file), rows);
      return report(rows);
    }
    if (*cmp) {
      const RunConfig a = load(c);
      RunConfig b = a;
      if (!config_b.empty()) b = load_config(config_b, a);
      else b.method = a.method == Method::Dtn ? Method::Impedance : Method::Dtn;
      for (const auto& s : sets_b) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set-b expects key=value");
        apply_setting(b, s.substr(0, eq), s.substr(eq + 1));
      }
      const auto rows = run_compare(a, b);
      write_compare_csv(output(c.out, file), rows);
      int code = 0;
      for (const auto& r : rows) code = std::max({code, report({r.a}), report({r.b})});
      return code;
    }
    if (*fld) {
      const RunConfig cfg = load(c);
      FieldDumpOptions opts;
      opts.nx = grid[0];
      opts.ny = grid[1];
      opts.extend = extend;
      if (diff_p > 0) opts.diff_p = diff_p;
      run_field_dump(cfg, opts, c.out.empty() ? "field" : c.out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const auto k = e.kind();
    return (k == ErrorKind::ConfigError || k == ErrorKind::InvalidArgument || k == ErrorKind::IoError) ? 2 : 3;
  }
  return 0;
}

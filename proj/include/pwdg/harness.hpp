#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pwdg/solve.hpp"

namespace pwdg {

enum class Method { Impedance, Dtn };
enum class Scenario { Circular, PlaneWave, TwoLayer, GratingStep, GratingLayers, Custom };

const char* to_string(Method m);
const char* to_string(Scenario s);

struct RunConfig {
  Method method = Method::Dtn;
  Scenario scenario = Scenario::TwoLayer;
  double k = 5.0;
  double theta = -kPi / 4;   // incidence angle
  double eps_plus = 1.0;     // permittivity above the grating
  double H = 3.0;
  cplx eps2{2.25, 0.0};      // lower layer of the two-layer scenario
  double xi = 1.0;           // circular wave order
  double d_angle = kPi / 4;  // plane-wave direction
  double h = 1.5;
  int p = 15;
  int M = 100;
  FluxParams flux;
  int quad_order = 10;       // Duffy order for error norms
  int gl_points = 10;        // Gauss–Legendre points for boundary data
  std::string mesh_file;
  std::map<int, cplx> region_eps;
  bool timing = false;
  int threads = 1;
  std::vector<int> p_values;
  std::vector<double> h_values;
  std::vector<int> M_values;
};

// key = value lines; '#' starts a comment.
RunConfig parse_config(std::istream& is, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const RunConfig& cfg);

// Everything needed to run one configuration.
struct Problem {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const PlaneWaveSpace> space;
  LinearSystem system;
  std::optional<FieldFn> exact;
  DtnSpec dtn;
  double alpha0 = 0.0;
};

Mesh build_mesh(const RunConfig& cfg);
InterfaceSpec scenario_interfaces(const RunConfig& cfg);
Problem build_problem(const RunConfig& cfg);

struct RunRecord {
  std::string sweep;
  int N = 0;
  double l2_rel = std::nan("");
  double h1_rel = std::nan("");
  double h1_semi_rel = std::nan("");
  double residual = std::nan("");
  double cond = std::nan("");
  double seconds = 0.0;
  double h = 0.0;
  bool conditioning_warning = false;
  std::vector<std::string> warnings;
  std::string error;     // empty on success
  int exit_class = 0;    // 2 configuration, 3 numerical
};

struct RunOutputs {
  std::ostream* mesh_dump = nullptr;
  std::ostream* matrix_dump = nullptr;
  std::shared_ptr<DiscreteSolution>* solution = nullptr;
};

RunRecord run_single(const RunConfig& cfg, const RunOutputs& out = {});

enum class SweepKind { P, H, M };
std::vector<RunRecord> run_sweep(const RunConfig& cfg, SweepKind kind);

// Header: sweep,N,l2_rel,h1_rel,residual,cond,seconds
void write_sweep_csv(std::ostream& os, const std::vector<RunRecord>& rows);

struct CompareRow {
  int p;
  RunRecord a, b;
};
std::vector<CompareRow> run_compare(const RunConfig& a, const RunConfig& b);
// Header: p,l2_rel_a,h1_rel_a,l2_rel_b,h1_rel_b
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

struct FieldDumpOptions {
  int nx = 200, ny = 100;
  int extend = 0;                  // periods added on each side
  std::optional<int> diff_p;       // second solution to dump alongside
};
// Writes <prefix>_field.txt ("x1 x2 re im") and <prefix>_{re,im,abs}.txt ("x1 x2 value").
// With diff_p = q the same set is also written for u_q under <prefix>_pq and for u_p - u_q
// under <prefix>_diff.
void run_field_dump(const RunConfig& cfg, const FieldDumpOptions& opts, const std::string& prefix);

}  // namespace pwdg

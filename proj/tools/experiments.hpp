#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbh/errors.hpp"
#include "tbh/scheme.hpp"

namespace tbh::cli {

enum class Experiment { fig2, fig3, fig4, fig5, point, verify, wigner };
enum class Format { csv, json };

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// `param:start:stop:count:lin|log`.
struct Sweep {
  std::string param;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;
  bool log = false;

  static Sweep parse(const std::string& text);
  std::vector<double> values() const;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::point;
  std::optional<double> alpha;
  std::optional<double> r;
  std::optional<double> r_alpha;
  double eta = 0.95;
  std::optional<double> zeta;
  std::optional<double> lambda2;
  std::optional<double> lc_km;
  double beta_db_per_km = 0.2;
  std::optional<double> z_km;
  std::optional<double> alpha_f;
  std::optional<Sweep> sweep;
  std::vector<double> etas;  // detector efficiencies for fig3 and fig4
  EngineKind engine = EngineKind::automatic;
  HeraldKind herald = HeraldKind::simple;
  std::string dv = "ideal";       // ideal | vacuum | spdc
  std::string cv = "cat";         // cat | squeezed
  std::string wigner_state = "simple";  // vacuum | ideal | simple
  double projector_sign = 1.0;
  int grid_points = 101;
  std::optional<double> grid_half_width;
  std::string out;
  Format format = Format::csv;
  std::string golden;
  bool write_golden = false;

  void validate() const;
  /// Cat amplitude: 0.25 for fig5, 2 otherwise unless given.
  double amplitude() const;
  /// Network description of a single operating point.
  NetworkConfig network() const;
  /// BS1 reflection implied by r or r_alpha (default r alpha = 0.075 sqrt 2).
  double reflection() const;
  double squeezing() const { return zeta.value_or(-0.061); }
};

/// 12 significant digits, shortest form.
std::string format_number(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
  std::string json() const;
  /// Column index by name; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

Table parse_csv(const std::string& text);

struct Report {
  Table table;
  /// Verify mode: every check within tolerance.
  bool passed = true;
  /// Human-readable summary printed to stdout (verify mode).
  std::string summary;
  /// JSON record of a point evaluation.
  std::string record;
};

Report run_experiment(const ExperimentConfig& cfg);

/// Default sweeps of the figure experiments.
Table fig2(const ExperimentConfig& cfg);
Table fig3(const ExperimentConfig& cfg);
Table fig4(const ExperimentConfig& cfg);
Table fig5(const ExperimentConfig& cfg);
Table wigner_table(const ExperimentConfig& cfg);
Report point(const ExperimentConfig& cfg);
Report verify(const ExperimentConfig& cfg);

/// Remote CV-qubit preparation through a lossy or depolarising channel,
/// evaluated on dense registers.
double remote_fidelity_engine(const std::string& encoding, double z_km, double alpha_f,
                              double beta_db_per_km, double lc_km);

/// Shrinks undisplaced DV modes of a hybrid register to cutoff 1 when they
/// carry no weight above it.
FockRegister compact_dv(const FockRegister& state);

/// Conditional CV state of a heralded hybrid register after the time-bin
/// projection (|1>_e + sign |1>_l)/sqrt 2.
FockRegister conditional_cv(const FockRegister& hybrid, double sign = 1.0);

/// Odd (sign -1) or even cat over B with the given cutoff.
FockRegister cat_register(double alpha, double sign, int cutoff);

}  // namespace tbh::cli

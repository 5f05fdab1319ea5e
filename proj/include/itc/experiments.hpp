#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "itc/config.hpp"
#include "itc/coupling.hpp"
#include "itc/entanglement.hpp"
#include "itc/sector.hpp"

namespace itc {

enum class Experiment { kSpectrum, kDeltaE, kConcProfile, kConcFirstLast };

std::string_view to_string(Experiment e);
/// Accepts both "delta_e" and "delta-e" spellings.
Experiment parse_experiment(std::string_view name);

struct ProfileSpec {
    enum class Kind { kSine, kUniform, kExplicit };
    Kind kind = Kind::kSine;
    double amplitude = 1.0;
    double length = 1.0;
    std::vector<double> kappas;  // explicit only; fixes N

    CouplingProfile build(std::size_t n_atoms) const;
    std::string describe() const;
};

/// Atom labels in configs and CSV output are 1-based.
struct PairSpec {
    enum class Mode { kFirstVsAll, kFirstVsLast, kExplicit };
    Mode mode = Mode::kFirstVsAll;
    std::size_t i = 1;
    std::size_t j = 2;

    std::string describe() const;
};

struct RunConfig {
    Experiment experiment = Experiment::kSpectrum;
    ProfileSpec profile;
    std::vector<std::size_t> n_atoms_list;
    std::vector<std::size_t> k_list;
    PairSpec pair;
    std::string output_dir = "out";
    bool emit_plot = false;
    bool verify = false;
    std::size_t sector_cap = kDefaultSectorCap;
    bool exact_oracle = false;  // conc experiments: add the exact-sector oracle column
};

/// Default grid and pair mode for each experiment.
RunConfig default_config(Experiment e);

/// Applies recognised keys over the defaults and validates the result.
/// Unknown keys throw std::invalid_argument.
RunConfig make_run_config(Experiment e, const ConfigMap& values);

void validate(const RunConfig& config);

struct ResultRow {
    std::size_t n_atoms = 0;
    std::size_t k = 0;
    std::size_t i = 0;  // 0 = not applicable
    std::size_t j = 0;
    std::string quantity;
    double value = 0.0;
    bool available = true;
    std::string method;
};

struct AuditRow {
    std::size_t n_atoms = 0;
    FormulaAudit audit;  // atom indices 0-based inside
};

struct RunResult {
    RunConfig config;
    std::vector<ResultRow> rows;
    std::vector<AuditRow> audits;
};

/// Worker count from ITC_WORKERS, else hardware concurrency (at least 1).
std::size_t worker_count();

RunResult run_spectrum(const RunConfig& config);
RunResult run_delta_e(const RunConfig& config);
RunResult run_conc_profile(const RunConfig& config);
RunResult run_conc_first_last(const RunConfig& config);
RunResult run_experiment(const RunConfig& config);

/// Contract and figure-shape checks; one message per violation.
std::vector<std::string> verify_result(const RunResult& result);

/// Long-format CSV: `#` lines declaring the run parameters, then the header
/// n_atoms,k,i,j,quantity,value,method. 15 significant digits, LF endings.
std::string to_csv(const RunResult& result);
std::string audit_csv(const RunResult& result);

/// 15 significant digits, shortest form that round-trips at that precision.
std::string format_number(double v);

struct WrittenFiles {
    std::string csv;
    std::string audit;
    std::string svg;  // empty when no plot was requested
};

WrittenFiles write_outputs(const RunResult& result);

/// Renders a CSV produced by to_csv. Throws std::invalid_argument when the
/// CSV has no data rows or does not match the experiment's schema.
std::string emit_plot(std::string_view csv, Experiment kind);

}  // namespace itc

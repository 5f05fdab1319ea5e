#include "itc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <iterator>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "itc/eigensolver.hpp"
#include "itc/error.hpp"
#include "itc/symmetric_functions.hpp"

namespace itc {
namespace {

// --- sweep plumbing -------------------------------------------------------

struct Cell {
    std::size_t n_atoms;
    std::size_t k;
};

struct CellOutput {
    std::vector<ResultRow> rows;
    std::vector<AuditRow> audits;
};

template <class Fn>
RunResult sweep(const RunConfig& config, Fn&& compute) {
    validate(config);
    std::vector<Cell> cells;
    for (std::size_t n : config.n_atoms_list) {
        for (std::size_t k : config.k_list) cells.push_back({n, k});
    }
    std::vector<CellOutput> outputs(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t c = next.fetch_add(1); c < cells.size(); c = next.fetch_add(1)) {
            try {
                outputs[c] = compute(cells[c]);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(worker_count(), cells.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    RunResult result;
    result.config = config;
    for (auto& o : outputs) {
        std::move(o.rows.begin(), o.rows.end(), std::back_inserter(result.rows));
        std::move(o.audits.begin(), o.audits.end(), std::back_inserter(result.audits));
    }
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.n_atoms != b.n_atoms) return a.n_atoms < b.n_atoms;
        if (a.k != b.k) return a.k < b.k;
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    });
    std::stable_sort(result.audits.begin(), result.audits.end(), [](const AuditRow& a, const AuditRow& b) {
        if (a.n_atoms != b.n_atoms) return a.n_atoms < b.n_atoms;
        if (a.audit.k != b.audit.k) return a.audit.k < b.audit.k;
        if (a.audit.j != b.audit.j) return a.audit.j < b.audit.j;
        return a.audit.i < b.audit.i;
    });
    return result;
}

ResultRow energy_row(const Cell& c, std::string quantity, double value, std::string method) {
    return ResultRow{c.n_atoms, c.k, 0, 0, std::move(quantity), value, true, std::move(method)};
}

ResultRow unavailable(const Cell& c, std::string quantity, std::size_t i = 0, std::size_t j = 0) {
    return ResultRow{c.n_atoms, c.k, i, j, std::move(quantity), 0.0, false, "unavailable"};
}

double analytic_energy(const CouplingProfile& p, std::size_t k) {
    const double n = static_cast<double>(p.n_atoms());
    const SymTable t = coupling_table(p, 2);
    const double n1 = norm_N(t, 1);
    if (k == 0) return -n / 2.0;
    if (k == 1) return 1.0 - n / 2.0 - n1;
    const double n2 = norm_N(t, 2);
    return 2.0 - n / 2.0 - std::sqrt(2.0 * n1 * n1 + (n2 / n1) * (n2 / n1));
}

struct Energies {
    double row1 = 0.0;
    bool has_row12 = false;
    double row12 = 0.0;
    bool has_exact = false;
    double exact = 0.0;
};

Energies energies(const RunConfig& config, const CouplingProfile& p, std::size_t k) {
    Energies e;
    e.row1 = row1_ground(p, k).value;
    try {
        const Row12Model m = build_row12_hamiltonian(p, k, kDefaultRow2AtomCap, config.sector_cap);
        e.row12 = eig_sym_dense(m.matrix).front().value;
        e.has_row12 = true;
    } catch (const ResourceLimitError&) {
    }
    if (sector_dimension(p.n_atoms(), k) <= config.sector_cap) {
        e.exact = ground_state(build_full_sector_hamiltonian(p, k, config.sector_cap)).value;
        e.has_exact = true;
    }
    return e;
}

double percent_gap(double reference, double other) {
    return 100.0 * std::abs((reference - other) / reference);
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_for(const PairSpec& spec, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    switch (spec.mode) {
        case PairSpec::Mode::kFirstVsAll:
            for (std::size_t j = 1; j < n; ++j) out.emplace_back(0, j);
            break;
        case PairSpec::Mode::kFirstVsLast:
            out.emplace_back(0, n - 1);
            break;
        case PairSpec::Mode::kExplicit:
            out.emplace_back(spec.i - 1, spec.j - 1);
            break;
    }
    return out;
}

CellOutput concurrence_cell(const RunConfig& config, const Cell& c) {
    CellOutput out;
    const CouplingProfile p = config.profile.build(c.n_atoms);
    const auto a = row1_ground_coefficients(p, c.k);

    std::optional<SectorEigenPair> exact;
    if (config.exact_oracle && sector_dimension(c.n_atoms, c.k) <= config.sector_cap) {
        exact = ground_state(build_full_sector_hamiltonian(p, c.k, config.sector_cap));
    }

    for (const auto& [i, j] : pairs_for(config.pair, c.n_atoms)) {
        const std::size_t li = i + 1;
        const std::size_t lj = j + 1;
        ConcurrenceResult analytic;
        if (c.k == 1) {
            analytic = concurrence_analytic_k1(p, i, j);
        } else if (c.k == 2) {
            analytic = concurrence_analytic_k2(p, i, j);
        } else {
            analytic = concurrence_analytic_general(p, a, i, j, c.k);
        }
        out.rows.push_back({c.n_atoms, c.k, li, lj, "C_analytic", analytic.value, true,
                            std::string(to_string(analytic.method))});
        const double mixture = wootters_concurrence(reduce_pair_from_row1_mixture(a, p, i, j));
        out.rows.push_back({c.n_atoms, c.k, li, lj, "C_oracle_row1", mixture, true, "wootters_row1_mixture"});
        if (config.exact_oracle) {
            if (exact) {
                const double v = wootters_concurrence(reduce_pair_from_sector_state(exact->vector, i, j));
                out.rows.push_back({c.n_atoms, c.k, li, lj, "C_oracle_exact", v, true, "wootters_exact_sector"});
            } else {
                out.rows.push_back(unavailable(c, "C_oracle_exact", li, lj));
            }
        }
        if (c.k >= 1) out.audits.push_back({c.n_atoms, audit_formulas(p, i, j, c.k)});
    }
    return out;
}

// --- verification helpers -------------------------------------------------

using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

std::map<Key, double> collect(const RunResult& r, std::string_view quantity) {
    std::map<Key, double> out;
    for (const auto& row : r.rows) {
        if (row.available && row.quantity == quantity) out[{row.n_atoms, row.k, row.i, row.j}] = row.value;
    }
    return out;
}

std::string cell_name(std::size_t n, std::size_t k) {
    return "N=" + std::to_string(n) + " k=" + std::to_string(k);
}

std::string pair_name(std::size_t n, std::size_t k, std::size_t i, std::size_t j) {
    return cell_name(n, k) + " (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void check_pair_contracts(const RunResult& r, std::vector<std::string>& bad) {
    const auto analytic = collect(r, "C_analytic");
    const auto mixture = collect(r, "C_oracle_row1");
    const auto exact = collect(r, "C_oracle_exact");
    for (const auto& [key, v] : analytic) {
        const auto [n, k, i, j] = key;
        if (auto it = mixture.find(key); it != mixture.end() && std::abs(v - it->second) > 1e-9) {
            bad.push_back(pair_name(n, k, i, j) + ": analytic " + format_number(v) + " vs row-1 oracle " +
                          format_number(it->second));
        }
        auto it = exact.find(key);
        if (it == exact.end()) continue;
        const double d = std::abs(v - it->second);
        if (k == 1 && d > 1e-10) {
            bad.push_back(pair_name(n, k, i, j) + ": k=1 analytic differs from exact oracle by " + format_number(d));
        }
        if (k == 2 && n >= 10 && d > 2e-2) {
            bad.push_back(pair_name(n, k, i, j) + ": k=2 analytic differs from exact oracle by " + format_number(d));
        }
    }
}

// value at (n, k, 1, j) for a first-vs-all sweep
std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, double>> profiles_by_cell(
    const std::map<Key, double>& values) {
    std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, double>> out;
    for (const auto& [key, v] : values) {
        const auto [n, k, i, j] = key;
        if (i == 1) out[{n, k}][j] = v;
    }
    return out;
}

void verify_spectrum(const RunResult& r, std::vector<std::string>& bad) {
    const auto row1 = collect(r, "E_row1");
    const auto row12 = collect(r, "E_row12");
    const auto exact = collect(r, "E_exact");
    const auto analytic = collect(r, "E_analytic");
    for (const auto& [key, e1] : row1) {
        const auto [n, k, i, j] = key;
        const double scale = std::max(1.0, std::abs(e1));
        if (auto it = analytic.find(key); it != analytic.end() && std::abs(e1 - it->second) > 1e-12 * scale) {
            bad.push_back(cell_name(n, k) + ": row-1 energy " + format_number(e1) + " vs closed form " +
                          format_number(it->second));
        }
        const auto e12 = row12.find(key);
        const auto ex = exact.find(key);
        if (e12 != row12.end() && e12->second > e1 + 1e-9 * scale) {
            bad.push_back(cell_name(n, k) + ": row-1+2 energy above row-1 energy");
        }
        if (ex != exact.end()) {
            if (e12 != row12.end() && ex->second > e12->second + 1e-9 * scale) {
                bad.push_back(cell_name(n, k) + ": exact energy above row-1+2 energy");
            }
            if (k <= 1 && std::abs(ex->second - e1) > 1e-10 * scale) {
                bad.push_back(cell_name(n, k) + ": exact and row-1 energies differ for k <= 1");
            }
        }
    }
}

void verify_delta_e(const RunResult& r, std::vector<std::string>& bad) {
    const auto delta = collect(r, "delta_e");
    const auto gap = collect(r, "row12_exact_gap");
    const auto kind = r.config.profile.kind;
    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> by_k;
    for (const auto& [key, d] : delta) {
        const auto [n, k, i, j] = key;
        if ((k <= 1 || kind == ProfileSpec::Kind::kUniform) && d > 1e-12) {
            bad.push_back(cell_name(n, k) + ": energy shift " + format_number(d) + " should vanish");
        }
        if (kind == ProfileSpec::Kind::kSine && k >= 2 && n >= 8) {
            if (!(d < 1.0)) bad.push_back(cell_name(n, k) + ": energy shift " + format_number(d) + "% is not below 1%");
            by_k[k].emplace_back(n, d);
        }
    }
    for (const auto& [k, series] : by_k) {
        for (std::size_t s = 1; s < series.size(); ++s) {
            if (series[s].second > series[s - 1].second + 1e-12) {
                bad.push_back("k=" + std::to_string(k) + ": energy shift grows from N=" +
                              std::to_string(series[s - 1].first) + " to N=" + std::to_string(series[s].first));
            }
        }
    }
    for (const auto& [key, g] : gap) {
        const auto [n, k, i, j] = key;
        if (!(g < 1.0)) bad.push_back(cell_name(n, k) + ": row-1+2 energy is " + format_number(g) + "% off exact");
    }
}

void verify_conc_profile(const RunResult& r, std::vector<std::string>& bad) {
    check_pair_contracts(r, bad);
    if (r.config.pair.mode != PairSpec::Mode::kFirstVsAll) return;
    const auto cells = profiles_by_cell(collect(r, "C_analytic"));

    if (r.config.profile.kind == ProfileSpec::Kind::kUniform) {
        for (const auto& [cell, prof] : cells) {
            for (const auto& [j, v] : prof) {
                if (std::abs(v - prof.begin()->second) > 1e-14) {
                    bad.push_back(pair_name(cell.first, cell.second, 1, j) + ": homogeneous pair values differ");
                }
            }
        }
        return;
    }
    if (r.config.profile.kind != ProfileSpec::Kind::kSine) return;

    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> peaks_by_k;
    for (const auto& [cell, prof] : cells) {
        const auto [n, k] = cell;
        if (k == 0) continue;
        // mirror pairs: (1, j) and (1, N+1-j) exclude atoms with equal couplings
        for (const auto& [j, v] : prof) {
            const std::size_t m = n + 1 - j;
            if (m < 2 || m == j) continue;
            if (auto it = prof.find(m); it != prof.end() && std::abs(v - it->second) > 1e-12) {
                bad.push_back(pair_name(n, k, 1, j) + ": not mirror symmetric");
            }
        }
        const auto peak = std::max_element(prof.begin(), prof.end(),
                                           [](const auto& x, const auto& y) { return x.second < y.second; });
        const std::size_t lo = (n + 1) / 2;
        const std::size_t hi = (n + 2) / 2;
        if (peak->first != lo && peak->first != hi) {
            bad.push_back(cell_name(n, k) + ": profile peaks at j=" + std::to_string(peak->first) +
                          " instead of the center");
        }
        peaks_by_k[k].emplace_back(n, peak->second);

        // nonincreasing in k at fixed N
        if (auto next = cells.upper_bound(cell); next != cells.end() && next->first.first == n) {
            for (const auto& [j, v] : prof) {
                auto it = next->second.find(j);
                if (it != next->second.end() && it->second > v + 1e-15) {
                    bad.push_back(pair_name(n, next->first.second, 1, j) + ": concurrence grows with k");
                }
            }
        }
    }
    for (const auto& [k, peaks] : peaks_by_k) {
        for (std::size_t s = 1; s < peaks.size(); ++s) {
            if (!(peaks[s].second < peaks[s - 1].second)) {
                bad.push_back("k=" + std::to_string(k) + ": peak concurrence does not fall from N=" +
                              std::to_string(peaks[s - 1].first) + " to N=" + std::to_string(peaks[s].first));
            }
        }
    }
}

void verify_conc_first_last(const RunResult& r, std::vector<std::string>& bad) {
    check_pair_contracts(r, bad);
    const auto analytic = collect(r, "C_analytic");
    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> by_n;
    for (const auto& [key, v] : analytic) {
        const auto [n, k, i, j] = key;
        if (k == 1) {
            const CouplingProfile p = r.config.profile.build(n);
            const double expected = p.kappa(i - 1) * p.kappa(j - 1) / p.sum_squares();
            if (std::abs(v - expected) > 4e-16 * std::max(1.0, expected)) {
                bad.push_back(pair_name(n, k, i, j) + ": k=1 value " + format_number(v) + " vs " +
                              format_number(expected));
            }
        }
        if (i == 1 && j == n && k >= 1) by_n[n].emplace_back(k, v);
    }
    if (r.config.profile.kind != ProfileSpec::Kind::kSine) return;

    std::vector<std::pair<std::size_t, double>> spreads;
    for (const auto& [n, series] : by_n) {
        if (n >= 10) {
            for (std::size_t s = 1; s < series.size(); ++s) {
                if (!(series[s].second < series[s - 1].second)) {
                    bad.push_back(cell_name(n, series[s].first) + ": first-last concurrence does not fall with k");
                }
            }
        }
        if (n >= 10 && series.size() >= 2) {
            double lo = series.front().second;
            double hi = lo;
            for (const auto& [k, v] : series) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            spreads.emplace_back(n, hi - lo);
        }
    }
    if (spreads.size() >= 2 && !(spreads.back().second < spreads.front().second)) {
        bad.push_back("spread over k at N=" + std::to_string(spreads.back().first) + " is not below N=" +
                      std::to_string(spreads.front().first));
    }
}

std::vector<std::size_t> to_sizes(const std::vector<long long>& v, std::string_view key) {
    std::vector<std::size_t> out;
    for (long long x : v) {
        if (x < 0) throw std::invalid_argument(std::string(key) + ": values must be nonnegative");
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> out;
    for (std::size_t x = lo; x <= hi; ++x) out.push_back(x);
    return out;
}

}  // namespace

// --- names and configuration ----------------------------------------------

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::kSpectrum: return "spectrum";
        case Experiment::kDeltaE: return "delta_e";
        case Experiment::kConcProfile: return "conc_profile";
        case Experiment::kConcFirstLast: return "conc_first_last";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '-', '_');
    for (auto e : {Experiment::kSpectrum, Experiment::kDeltaE, Experiment::kConcProfile, Experiment::kConcFirstLast}) {
        if (s == to_string(e)) return e;
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

CouplingProfile ProfileSpec::build(std::size_t n_atoms) const {
    switch (kind) {
        case Kind::kSine: return build_sine_profile(n_atoms, length, amplitude);
        case Kind::kUniform: return build_uniform_profile(n_atoms, amplitude);
        case Kind::kExplicit:
            if (n_atoms != kappas.size()) {
                throw std::invalid_argument("explicit profile has " + std::to_string(kappas.size()) +
                                            " couplings, asked for N=" + std::to_string(n_atoms));
            }
            return from_explicit(kappas);
    }
    throw std::invalid_argument("unknown profile kind");
}

std::string ProfileSpec::describe() const {
    switch (kind) {
        case Kind::kSine:
            return "sine, kappa_j = " + format_number(amplitude) + " sin(pi x_j / L), L = " + format_number(length) +
                   ", x_j = j L / (N + 1)";
        case Kind::kUniform: return "uniform, kappa = " + format_number(amplitude);
        case Kind::kExplicit: {
            std::string s = "explicit, kappas = [";
            for (std::size_t q = 0; q < kappas.size(); ++q) s += (q ? ", " : "") + format_number(kappas[q]);
            return s + "]";
        }
    }
    return "unknown";
}

std::string PairSpec::describe() const {
    switch (mode) {
        case Mode::kFirstVsAll: return "first_vs_all";
        case Mode::kFirstVsLast: return "first_vs_last";
        case Mode::kExplicit: return "[" + std::to_string(i) + ", " + std::to_string(j) + "]";
    }
    return "unknown";
}

RunConfig default_config(Experiment e) {
    RunConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::kSpectrum:
            c.n_atoms_list = range(4, 12);
            c.k_list = range(0, 4);
            break;
        case Experiment::kDeltaE:
            c.n_atoms_list = range(4, 20);
            c.k_list = range(1, 6);
            break;
        case Experiment::kConcProfile:
            c.n_atoms_list = {10, 20, 30};
            c.k_list = range(1, 6);
            c.pair.mode = PairSpec::Mode::kFirstVsAll;
            break;
        case Experiment::kConcFirstLast:
            c.n_atoms_list = range(4, 40);
            c.k_list = range(1, 6);
            c.pair.mode = PairSpec::Mode::kFirstVsLast;
            break;
    }
    return c;
}

RunConfig make_run_config(Experiment e, const ConfigMap& values) {
    RunConfig c = default_config(e);
    static const std::set<std::string> known = {"experiment", "profile", "kappa",  "length",     "kappas",
                                                "n_atoms",    "k",       "pair",   "output_dir", "plot",
                                                "verify",     "sector_cap", "exact_oracle"};
    for (const auto& [key, v] : values) {
        if (known.count(key) == 0) throw std::invalid_argument("unknown config key '" + key + "'");
    }
    auto get = [&](const char* key) -> const ConfigValue* {
        auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };

    if (auto v = get("experiment"); v && parse_experiment(config_string(*v, "experiment")) != e) {
        throw std::invalid_argument("config is for experiment '" + config_string(*v, "experiment") +
                                    "', not '" + std::string(to_string(e)) + "'");
    }
    if (auto v = get("profile")) {
        const auto name = config_string(*v, "profile");
        if (name == "sine") {
            c.profile.kind = ProfileSpec::Kind::kSine;
        } else if (name == "uniform") {
            c.profile.kind = ProfileSpec::Kind::kUniform;
        } else if (name == "explicit") {
            c.profile.kind = ProfileSpec::Kind::kExplicit;
        } else {
            throw std::invalid_argument("profile: expected sine, uniform or explicit, got '" + name + "'");
        }
    }
    if (auto v = get("kappa")) c.profile.amplitude = config_real(*v, "kappa");
    if (auto v = get("length")) c.profile.length = config_real(*v, "length");
    if (auto v = get("kappas")) {
        c.profile.kappas = config_real_list(*v, "kappas");
        if (!get("profile")) c.profile.kind = ProfileSpec::Kind::kExplicit;
    }
    if (auto v = get("n_atoms")) {
        c.n_atoms_list = to_sizes(config_integer_list(*v, "n_atoms"), "n_atoms");
    } else if (c.profile.kind == ProfileSpec::Kind::kExplicit) {
        c.n_atoms_list = {c.profile.kappas.size()};
    }
    if (auto v = get("k")) c.k_list = to_sizes(config_integer_list(*v, "k"), "k");
    if (auto v = get("pair")) {
        if (v->kind == ConfigValue::Kind::kList) {
            const auto ij = to_sizes(config_integer_list(*v, "pair"), "pair");
            if (ij.size() != 2) throw std::invalid_argument("pair: expected [i, j]");
            c.pair = {PairSpec::Mode::kExplicit, ij[0], ij[1]};
        } else {
            const auto mode = config_string(*v, "pair");
            if (mode == "first_vs_all") {
                c.pair.mode = PairSpec::Mode::kFirstVsAll;
            } else if (mode == "first_vs_last") {
                c.pair.mode = PairSpec::Mode::kFirstVsLast;
            } else {
                throw std::invalid_argument("pair: expected first_vs_all, first_vs_last or [i, j]");
            }
        }
    }
    if (auto v = get("output_dir")) c.output_dir = config_string(*v, "output_dir");
    if (auto v = get("plot")) c.emit_plot = config_bool(*v, "plot");
    if (auto v = get("verify")) c.verify = config_bool(*v, "verify");
    if (auto v = get("exact_oracle")) c.exact_oracle = config_bool(*v, "exact_oracle");
    if (auto v = get("sector_cap")) {
        const long long cap = config_integer(*v, "sector_cap");
        if (cap <= 0) throw std::invalid_argument("sector_cap must be positive");
        c.sector_cap = static_cast<std::size_t>(cap);
    }
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    if (c.n_atoms_list.empty()) throw std::invalid_argument("n_atoms list is empty");
    if (c.k_list.empty()) throw std::invalid_argument("k list is empty");
    if (c.output_dir.empty()) throw std::invalid_argument("output_dir is empty");
    const bool pairs = c.experiment == Experiment::kConcProfile || c.experiment == Experiment::kConcFirstLast;
    for (std::size_t n : c.n_atoms_list) {
        if (n == 0 || n > kMaxAtoms) throw std::invalid_argument("n_atoms must be in 1.." + std::to_string(kMaxAtoms));
        if (pairs && n < 2) throw std::invalid_argument("concurrence needs at least two atoms");
        if (pairs && c.pair.mode == PairSpec::Mode::kExplicit && std::max(c.pair.i, c.pair.j) > n) {
            throw std::invalid_argument("pair " + c.pair.describe() + " is out of range for N=" + std::to_string(n));
        }
    }
    if (c.pair.mode == PairSpec::Mode::kExplicit && (c.pair.i == 0 || c.pair.j == 0 || c.pair.i == c.pair.j)) {
        throw std::invalid_argument("pair must name two distinct atoms (1-based)");
    }
    if (c.profile.kind == ProfileSpec::Kind::kExplicit) {
        if (c.profile.kappas.empty()) throw std::invalid_argument("explicit profile needs kappas");
        for (std::size_t n : c.n_atoms_list) {
            if (n != c.profile.kappas.size()) throw std::invalid_argument("n_atoms must match the kappas list");
        }
    }
    if (!(c.profile.amplitude > 0.0) || !std::isfinite(c.profile.amplitude)) {
        throw std::invalid_argument("kappa must be positive");
    }
    if (!(c.profile.length > 0.0) || !std::isfinite(c.profile.length)) {
        throw std::invalid_argument("length must be positive");
    }
    // Surface profile errors (e.g. nonpositive explicit couplings) before a sweep starts.
    for (std::size_t n : c.n_atoms_list) c.profile.build(n);
}

std::size_t worker_count() {
    if (const char* env = std::getenv("ITC_WORKERS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// --- experiments ----------------------------------------------------------

RunResult run_spectrum(const RunConfig& config) {
    return sweep(config, [&](const Cell& c) {
        CellOutput out;
        const CouplingProfile p = config.profile.build(c.n_atoms);
        const Energies e = energies(config, p, c.k);
        if (c.k <= 2) {
            out.rows.push_back(energy_row(c, "E_analytic", analytic_energy(p, c.k), "analytic_k" + std::to_string(c.k)));
        }
        out.rows.push_back(energy_row(c, "E_row1", e.row1, "row1_tridiagonal"));
        out.rows.push_back(e.has_row12 ? energy_row(c, "E_row12", e.row12, "row12_projected")
                                       : unavailable(c, "E_row12"));
        out.rows.push_back(e.has_exact ? energy_row(c, "E_exact", e.exact, "exact_sector") : unavailable(c, "E_exact"));
        return out;
    });
}

RunResult run_delta_e(const RunConfig& config) {
    return sweep(config, [&](const Cell& c) {
        CellOutput out;
        const CouplingProfile p = config.profile.build(c.n_atoms);
        const Energies e = energies(config, p, c.k);
        out.rows.push_back(energy_row(c, "E_row1", e.row1, "row1_tridiagonal"));
        if (e.has_row12) {
            out.rows.push_back(energy_row(c, "E_row12", e.row12, "row12_projected"));
            out.rows.push_back(e.row1 != 0.0 ? energy_row(c, "delta_e", percent_gap(e.row1, e.row12), "row12_vs_row1")
                                             : unavailable(c, "delta_e"));
        } else {
            out.rows.push_back(unavailable(c, "E_row12"));
            out.rows.push_back(unavailable(c, "delta_e"));
        }
        if (e.has_exact) {
            out.rows.push_back(energy_row(c, "E_exact", e.exact, "exact_sector"));
            if (e.has_row12 && e.exact != 0.0) {
                out.rows.push_back(energy_row(c, "row12_exact_gap", percent_gap(e.exact, e.row12), "row12_vs_exact"));
            }
        } else {
            out.rows.push_back(unavailable(c, "E_exact"));
        }
        return out;
    });
}

RunResult run_conc_profile(const RunConfig& config) {
    return sweep(config, [&](const Cell& c) { return concurrence_cell(config, c); });
}

RunResult run_conc_first_last(const RunConfig& config) {
    return sweep(config, [&](const Cell& c) { return concurrence_cell(config, c); });
}

RunResult run_experiment(const RunConfig& config) {
    switch (config.experiment) {
        case Experiment::kSpectrum: return run_spectrum(config);
        case Experiment::kDeltaE: return run_delta_e(config);
        case Experiment::kConcProfile: return run_conc_profile(config);
        case Experiment::kConcFirstLast: return run_conc_first_last(config);
    }
    throw std::invalid_argument("unknown experiment");
}

std::vector<std::string> verify_result(const RunResult& r) {
    std::vector<std::string> bad;
    switch (r.config.experiment) {
        case Experiment::kSpectrum: verify_spectrum(r, bad); break;
        case Experiment::kDeltaE: verify_delta_e(r, bad); break;
        case Experiment::kConcProfile: verify_conc_profile(r, bad); break;
        case Experiment::kConcFirstLast: verify_conc_first_last(r, bad); break;
    }
    return bad;
}

// --- output ---------------------------------------------------------------

std::string format_number(double v) {
    if (!std::isfinite(v)) return "";
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string to_csv(const RunResult& r) {
    std::ostringstream out;
    out << "# experiment = " << to_string(r.config.experiment) << '\n';
    out << "# profile = " << r.config.profile.describe() << '\n';
    if (r.config.experiment == Experiment::kConcProfile || r.config.experiment == Experiment::kConcFirstLast) {
        out << "# pair = " << r.config.pair.describe() << ", atom labels 1-based\n";
    }
    out << "# sector_cap = " << r.config.sector_cap << '\n';
    out << "n_atoms,k,i,j,quantity,value,method\n";
    for (const auto& row : r.rows) {
        out << row.n_atoms << ',' << row.k << ',';
        if (row.i != 0) out << row.i;
        out << ',';
        if (row.j != 0) out << row.j;
        out << ',' << row.quantity << ',' << (row.available ? format_number(row.value) : "") << ',' << row.method
            << '\n';
    }
    return out.str();
}

std::string audit_csv(const RunResult& r) {
    std::ostringstream out;
    out << "# closed forms against the Wootters oracle on the row-1 reduction, atom labels 1-based\n";
    out << "n_atoms,k,i,j,oracle,general,general_own_order,k2_weighted,k2_unweighted,general_error,own_order_error\n";
    for (const auto& a : r.audits) {
        const auto& f = a.audit;
        out << a.n_atoms << ',' << f.k << ',' << f.i + 1 << ',' << f.j + 1 << ',' << format_number(f.oracle) << ','
            << format_number(f.general) << ',' << format_number(f.general_own_order) << ','
            << format_number(f.k2_weighted) << ',' << format_number(f.k2_unweighted) << ','
            << format_number(f.general_error()) << ',' << format_number(f.own_order_error()) << '\n';
    }
    return out.str();
}

WrittenFiles write_outputs(const RunResult& r) {
    namespace fs = std::filesystem;
    const fs::path dir(r.config.output_dir);
    fs::create_directories(dir);
    const std::string stem(to_string(r.config.experiment));
    auto write = [](const fs::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << text;
        if (!f) throw std::runtime_error("failed writing " + path.string());
    };

    WrittenFiles files;
    const std::string csv = to_csv(r);
    files.csv = (dir / (stem + ".csv")).string();
    write(files.csv, csv);
    if (!r.audits.empty()) {
        files.audit = (dir / (stem + "_audit.csv")).string();
        write(files.audit, audit_csv(r));
    }
    if (r.config.emit_plot) {
        files.svg = (dir / (stem + ".svg")).string();
        write(files.svg, emit_plot(csv, r.config.experiment));
    }
    return files;
}

}  // namespace itc

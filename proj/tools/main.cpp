// Copyright 2026 The fockmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fockmetro command-line driver. Exit codes: 0 success, 1 runtime failure,
// 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config_json.hpp"
#include "csv_io.hpp"
#include "fockmetro/fockmetro.h"

namespace fs = std::filesystem;
using namespace fockmetro::cli;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(fm_status status) {
    if (status != FM_OK) {
        throw RuntimeFailure(std::string(fm_status_name(status)) + ": " + fm_last_error_message());
    }
}

template <typename T, void (*Free)(T *)>
struct Handle {
    T *ptr = nullptr;
    Handle() = default;
    Handle(const Handle &) = delete;
    Handle &operator=(const Handle &) = delete;
    ~Handle() { Free(ptr); }
    T **out() { return &ptr; }
    T *get() const { return ptr; }
};

using StateHandle = Handle<fm_state, fm_state_free>;
using SweepHandle = Handle<fm_sweep, fm_sweep_free>;
using OptHandle = Handle<fm_opt_result, fm_opt_result_free>;
using WignerHandle = Handle<fm_wigner, fm_wigner_free>;

const std::map<std::string, fm_kind> kKinds{{"jc", FM_KIND_JC}, {"kerr", FM_KIND_KERR}};
const std::map<std::string, fm_qfi_estimator> kEstimators{{"fidelity", FM_QFI_FIDELITY},
                                                          {"variance", FM_QFI_VARIANCE}};
const std::map<std::string, fm_quadrature_frame> kFrames{{"reference-arm", FM_FRAME_REFERENCE_ARM},
                                                         {"encoded", FM_FRAME_ENCODED}};
const std::map<std::string, fm_measurement_kind> kMeasurements{{"counting", FM_MEASURE_COUNTING},
                                                               {"homodyne", FM_MEASURE_HOMODYNE}};

std::string num(double v) {
    return format_number(v);
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct Output {
    std::string dir = ".";
    std::size_t workers = 1;

    void add(CLI::App *app) {
        app->add_option("--out", dir, "Output directory")->capture_default_str();
        app->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();
    }
    fs::path path(const std::string &name) const { return fs::path(dir) / name; }
};

struct Physics {
    std::string kind;
    double n = 20.0;
    std::size_t cutoff = 0;
    double phi = fm_default_phi();
    double delta = fm_default_delta();

    void add(CLI::App *app, bool allow_zero_photons = false) {
        app->add_option("--kind", kind, "Nonlinearity: jc or kerr")
            ->required()
            ->check(CLI::IsMember({"jc", "kerr"}));
        app->add_option("--n", n, "Total mean photon number N")
            ->capture_default_str()
            ->check(allow_zero_photons ? CLI::Validator(CLI::NonNegativeNumber) : CLI::Validator(CLI::PositiveNumber));
        app->add_option("--cutoff", cutoff, "Fock cutoff per mode (0 = automatic)")->capture_default_str();
        app->add_option("--phi", phi, "Operating phase")->capture_default_str();
        app->add_option("--delta", delta, "Fidelity step for the QFI")->capture_default_str()->check(
            CLI::PositiveNumber);
    }
    fm_kind fm() const { return kKinds.at(kind); }
    fm_problem problem() const {
        fm_problem p;
        fm_problem_default(&p);
        p.kind = fm();
        p.n_mean = n;
        p.cutoff = cutoff;
        p.phi = phi;
        p.delta = delta;
        return p;
    }
};

struct Optimizer {
    std::size_t max_iters = 1000;
    double tol = 1e-10;
    double init_scale = 1e-2;
    double step = 0.5;
    std::size_t seeds = 10;
    std::size_t dmax = 10;
    std::vector<std::size_t> depths;
    std::uint64_t master_seed = 0;

    void add(CLI::App *app, std::size_t default_dmax) {
        dmax = default_dmax;
        app->add_option("--max-iters", max_iters, "Objective evaluations per depth")->capture_default_str()->check(
            CLI::PositiveNumber);
        app->add_option("--tol", tol, "Simplex convergence tolerance")->capture_default_str()->check(
            CLI::PositiveNumber);
        app->add_option("--init-scale", init_scale, "Half-width of the random start")->capture_default_str();
        app->add_option("--step", step, "Initial simplex edge")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--seeds", seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--dmax", dmax, "Largest depth")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--depths", depths, "Explicit depth list (overrides --dmax)")->delimiter(',');
        app->add_option("--master-seed", master_seed, "Top-level random seed")->capture_default_str();
    }
    std::vector<std::size_t> schedule() const {
        if (!depths.empty()) {
            return depths;
        }
        std::vector<std::size_t> out;
        for (std::size_t d = 1; d <= dmax; ++d) {
            out.push_back(d);
        }
        return out;
    }
    fm_optimizer_config config(std::size_t workers) const {
        fm_optimizer_config c;
        fm_optimizer_config_default(&c);
        c.max_iters = max_iters;
        c.tol = tol;
        c.init_scale = init_scale;
        c.initial_step = step;
        c.seeds = seeds;
        c.d_max = schedule().back();
        c.master_seed = master_seed;
        c.workers = workers;
        return c;
    }
};

std::string write_manifest_for(const CLI::App *sub, const Output &out) {
    Manifest m;
    m.command = sub->get_name();
    m.config = ConfigJson::to_json(sub, true);
    m.library_version = fm_version();
    write_manifest(out.path(m.command + ".manifest.json"), m);
    return m.hash();
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepCmd {
    Output out;
    Physics phys;
    std::string estimator = "fidelity";
    bool counting = false;
    bool homodyne = false;
    double theta = 0.0;
    std::string frame = "reference-arm";
    double t_start = 0.0;
    double t_stop = 0.0;
    std::size_t t_points = 0;
    std::vector<double> ns;

    void add(CLI::App *app) {
        phys.add(app);
        out.add(app);
        app->add_option("--estimator", estimator, "QFI estimator: fidelity or variance")
            ->capture_default_str()
            ->check(CLI::IsMember({"fidelity", "variance"}));
        app->add_flag("--counting", counting, "Add the photon-counting CFI column");
        app->add_flag("--homodyne", homodyne, "Add the homodyne CFI column");
        app->add_option("--theta", theta, "Homodyne quadrature angle")->capture_default_str();
        app->add_option("--frame", frame, "Quadrature frame: reference-arm or encoded")
            ->capture_default_str()
            ->check(CLI::IsMember({"reference-arm", "encoded"}));
        app->add_option("--t-start", t_start, "Grid start (with --t-stop and --t-points)")->capture_default_str();
        app->add_option("--t-stop", t_stop, "Grid stop")->capture_default_str();
        app->add_option("--t-points", t_points, "Grid points (0 = default grid)")->capture_default_str();
        app->add_option("--ns", ns, "Several photon numbers; also emits the scaling fit")->delimiter(',')->check(
            CLI::PositiveNumber);
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        std::vector<double> times;
        if (t_points == 0) {
            std::size_t count = 0;
            check(fm_default_time_grid(phys.fm(), nullptr, 0, &count));
            times.resize(count);
            check(fm_default_time_grid(phys.fm(), times.data(), times.size(), &count));
        } else {
            if (t_points < 2 || !(t_stop > t_start)) {
                throw RuntimeFailure("custom grid needs --t-stop > --t-start and --t-points >= 2");
            }
            for (std::size_t i = 0; i < t_points; ++i) {
                times.push_back(t_start + (t_stop - t_start) * static_cast<double>(i) / static_cast<double>(t_points - 1));
            }
        }
        fm_sweep_options o;
        fm_sweep_options_default(&o);
        o.cutoff = phys.cutoff;
        o.phi = phys.phi;
        o.delta = phys.delta;
        o.estimator = kEstimators.at(estimator);
        o.counting = counting;
        o.homodyne = homodyne;
        o.theta = theta;
        o.frame = kFrames.at(frame);
        o.workers = out.workers;

        const std::vector<double> photon_numbers = ns.empty() ? std::vector<double>{phys.n} : ns;
        CsvWriter sweep_csv(out.path("sweep_" + phys.kind + ".csv"), hash,
                            {"kind", "N", "time", "inv_qfi", "inv_cfi_counting", "inv_cfi_homodyne"});
        CsvWriter minima_csv(out.path("minima_" + phys.kind + ".csv"), hash, {"kind", "N", "index", "time", "inv_qfi"});
        std::vector<double> fit_x, fit_y;
        for (double n : photon_numbers) {
            SweepHandle s;
            check(fm_sweep_run(phys.fm(), n, times.data(), times.size(), &o, s.out()));
            for (std::size_t i = 0; i < fm_sweep_size(s.get()); ++i) {
                fm_sweep_row r;
                check(fm_sweep_row_at(s.get(), i, &r));
                sweep_csv.row({phys.kind, num(n), num(r.time), num(r.inv_qfi), num(r.inv_cfi_counting),
                               num(r.inv_cfi_homodyne)});
            }
            const std::size_t nm = fm_sweep_minima_count(s.get());
            for (std::size_t i = 0; i < nm; ++i) {
                fm_extremum e;
                check(fm_sweep_minimum_at(s.get(), i, &e));
                minima_csv.row({phys.kind, num(n), std::to_string(i), num(e.time), num(e.value)});
                std::printf("%s N=%g minimum %zu: time %.6g inv_qfi %.6g\n", phys.kind.c_str(), n, i, e.time, e.value);
                if (i == 0) {
                    fit_x.push_back(n);
                    fit_y.push_back(e.time);
                }
            }
        }
        sweep_csv.close();
        minima_csv.close();
        if (phys.fm() == FM_KIND_JC && fit_x.size() >= 3) {
            fm_fit_result f;
            check(fm_fit(FM_FIT_SQRT, fit_x.data(), fit_y.data(), fit_x.size(), &f));
            CsvWriter fit_csv(out.path("fit_" + phys.kind + ".csv"), hash,
                              {"quantity", "model", "c0", "c1", "c2", "r_squared"});
            fit_csv.row({"first_minimum_time", "sqrt", num(f.coefficients[0]), num(f.coefficients[1]),
                         num(f.coefficients[2]), num(f.r_squared)});
            fit_csv.close();
            std::printf("first-minimum fit: %.6g sqrt(N + %.6g) + %.6g, r^2 = %.6f\n", f.coefficients[0],
                        f.coefficients[1], f.coefficients[2], f.r_squared);
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeCmd {
    Output out;
    Physics phys;
    Optimizer opt;
    std::string stage = "prepare";
    std::string measurement = "counting";
    double theta = 0.0;
    std::string frame = "reference-arm";
    std::string prep_dir;

    void add(CLI::App *app) {
        phys.add(app);
        out.add(app);
        opt.add(app, 10);
        app->add_option("--stage", stage, "prepare, measure or both")
            ->capture_default_str()
            ->check(CLI::IsMember({"prepare", "measure", "both"}));
        app->add_option("--measurement", measurement, "counting or homodyne")
            ->capture_default_str()
            ->check(CLI::IsMember({"counting", "homodyne"}));
        app->add_option("--theta", theta, "Homodyne quadrature angle")->capture_default_str();
        app->add_option("--frame", frame, "Quadrature frame: reference-arm or encoded")
            ->capture_default_str()
            ->check(CLI::IsMember({"reference-arm", "encoded"}));
        app->add_option("--prep-dir", prep_dir, "Directory holding a stored preparation run (default: --out)");
    }

    std::string params_name(const std::string &which, std::size_t seed, std::size_t d) const {
        return "params/" + which + "_" + phys.kind + "_s" + std::to_string(seed) + "_d" + std::to_string(d) +
               ".params";
    }

    // Writes records; returns the seeds that failed.
    std::vector<std::size_t> emit(const fm_opt_result *result, const std::string &which, const std::string &hash) {
        CsvWriter csv(out.path("opt_" + which + "_" + phys.kind + ".csv"), hash,
                      {"kind", "N", "d", "seed", "objective", "inv_fisher", "budget", "iters", "wall_time",
                       "params_file", "error"});
        std::vector<std::size_t> failed;
        for (std::size_t i = 0; i < fm_opt_result_size(result); ++i) {
            fm_opt_record r;
            check(fm_opt_result_at(result, i, &r));
            std::string file;
            std::string error;
            if (r.error == nullptr) {
                file = params_name(which, r.seed, r.d);
                write_params(out.path(file), {phys.kind, r.d, std::vector<double>(r.params, r.params + r.param_count)});
            } else {
                error = r.error;
                for (char &c : error) {
                    if (c == ',' || c == '\n') {
                        c = ';';
                    }
                }
                failed.push_back(r.seed);
            }
            csv.row({phys.kind, num(r.n_mean), std::to_string(r.d), std::to_string(r.seed), num(r.objective),
                     num(r.inv_fisher), num(r.budget), std::to_string(r.iters), num(r.wall_time), file, error});
        }
        csv.close();
        return failed;
    }

    void report_best(const fm_opt_result *result, const char *label) {
        std::map<std::size_t, double> best;
        for (std::size_t i = 0; i < fm_opt_result_size(result); ++i) {
            fm_opt_record r;
            check(fm_opt_result_at(result, i, &r));
            if (r.error == nullptr && (!best.count(r.d) || r.inv_fisher < best[r.d])) {
                best[r.d] = r.inv_fisher;
            }
        }
        for (const auto &[d, v] : best) {
            std::printf("%s %s N=%g d=%zu best inverse Fisher information %.6g\n", label, phys.kind.c_str(), phys.n, d,
                        v);
        }
    }

    // Best stored preparation parameters per depth.
    std::map<std::size_t, std::vector<double>> load_preparation() const {
        const fs::path dir = prep_dir.empty() ? fs::path(out.dir) : fs::path(prep_dir);
        const fs::path csv_path = dir / ("opt_prepare_" + phys.kind + ".csv");
        if (!fs::exists(csv_path)) {
            throw RuntimeFailure("no stored preparation at " + csv_path.string() +
                                 "; run with --stage prepare or both first");
        }
        const CsvTable table = read_csv(csv_path);
        std::map<std::size_t, std::pair<double, std::string>> best;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const std::string &file = table.rows[i][table.column("params_file")];
            if (file.empty()) {
                continue;
            }
            const auto d = static_cast<std::size_t>(table.number(i, "d"));
            const double objective = table.number(i, "objective");
            if (!best.count(d) || objective < best[d].first) {
                best[d] = {objective, file};
            }
        }
        std::map<std::size_t, std::vector<double>> out_params;
        for (const auto &[d, entry] : best) {
            const ParamsFile p = read_params(dir / entry.second);
            if (p.kind != phys.kind) {
                throw RuntimeFailure("stored preparation is for kind " + p.kind);
            }
            out_params[d] = p.values;
        }
        return out_params;
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        const fm_problem problem = phys.problem();
        const auto schedule = opt.schedule();
        const fm_optimizer_config config = opt.config(out.workers);
        std::vector<std::size_t> failed;
        if (stage == "prepare" || stage == "both") {
            OptHandle result;
            check(fm_optimize_preparation(&problem, schedule.data(), schedule.size(), &config, result.out()));
            failed = emit(result.get(), "prepare", hash);
            report_best(result.get(), "prepare");
        }
        if (stage == "measure" || stage == "both") {
            const auto prepared = load_preparation();
            std::vector<fm_probe> probes;
            for (std::size_t d : schedule) {
                const auto it = prepared.find(d);
                if (it == prepared.end()) {
                    throw RuntimeFailure("stored preparation has no depth " + std::to_string(d));
                }
                probes.push_back({it->second.data(), it->second.size(), 0.0});
            }
            fm_measurement_model model;
            fm_measurement_model_default(&model);
            model.kind = kMeasurements.at(measurement);
            model.include_emitters = phys.fm() == FM_KIND_JC;
            model.theta = theta;
            model.frame = kFrames.at(frame);
            OptHandle result;
            check(fm_optimize_measurement(&problem, probes.data(), probes.size(), &model, schedule.data(),
                                          schedule.size(), &config, result.out()));
            const auto more = emit(result.get(), "measure", hash);
            failed.insert(failed.end(), more.begin(), more.end());
            report_best(result.get(), "measure");
        }
        if (!failed.empty()) {
            std::string list;
            for (std::size_t s : failed) {
                list += (list.empty() ? "" : ", ") + std::to_string(s);
            }
            std::fprintf(stderr, "error: optimization failed for seeds %s (see the error column)\n", list.c_str());
            return kExitRuntime;
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// wigner
// ---------------------------------------------------------------------------

struct WignerCmd {
    Output out;
    Physics phys;
    double time = 0.0;
    std::string params_file;
    std::size_t mode = 0;
    double x_max = 0.0;
    std::size_t points = 201;

    void add(CLI::App *app) {
        phys.add(app, true);
        out.add(app);
        app->add_option("--time", time, "Continuous interaction time")->capture_default_str();
        app->add_option("--params", params_file, "Circuit parameter file (replaces --time)");
        app->add_option("--mode", mode, "Mode to keep (0 or 1)")->capture_default_str()->check(CLI::Range(0, 1));
        app->add_option("--x-max", x_max, "Grid half-width (0 = automatic)")->capture_default_str();
        app->add_option("--points", points, "Points per axis")->capture_default_str()->check(CLI::Range(3, 2001));
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        StateHandle psi0;
        check(fm_state_initial(phys.fm(), phys.n, phys.cutoff, psi0.out()));
        StateHandle probe;
        if (!params_file.empty()) {
            const ParamsFile p = read_params(params_file);
            if (p.kind != phys.kind) {
                throw RuntimeFailure("parameter file is for kind " + p.kind);
            }
            check(fm_state_run_circuit(psi0.get(), phys.fm(), p.values.data(), p.values.size(), probe.out()));
        } else {
            check(fm_state_evolve(psi0.get(), phys.fm(), time, probe.out()));
        }
        std::vector<double> axis;
        if (x_max > 0.0 || points != 201) {
            double h = x_max;
            if (h <= 0.0) {
                std::size_t c = phys.cutoff;
                if (c == 0) {
                    check(fm_default_cutoff(phys.n, &c));
                }
                h = std::max(9.0, std::ceil(std::sqrt(2.0 * static_cast<double>(c))));
            }
            for (std::size_t i = 0; i < points; ++i) {
                axis.push_back(-h + 2.0 * h * static_cast<double>(i) / static_cast<double>(points - 1));
            }
        }
        WignerHandle w;
        check(fm_wigner_from_state(probe.get(), mode, axis.empty() ? nullptr : axis.data(), axis.size(),
                                   axis.empty() ? nullptr : axis.data(), axis.size(), w.out()));
        std::size_t nx = 0, np = 0;
        check(fm_wigner_shape(w.get(), &nx, &np));
        const double *xs = fm_wigner_x_axis(w.get());
        const double *ps = fm_wigner_p_axis(w.get());
        const double *values = fm_wigner_values(w.get());
        std::vector<std::string> header{"p\\x"};
        for (std::size_t j = 0; j < nx; ++j) {
            header.push_back(num(xs[j]));
        }
        CsvWriter csv(out.path("wigner_" + phys.kind + "_mode" + std::to_string(mode) + ".csv"), hash, header);
        double lo = values[0], hi = values[0];
        for (std::size_t i = 0; i < np; ++i) {
            std::vector<std::string> row{num(ps[i])};
            for (std::size_t j = 0; j < nx; ++j) {
                const double v = values[i * nx + j];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                row.push_back(num(v));
            }
            csv.row(row);
        }
        csv.close();
        std::printf("integral %.6f purity %.6f min %.6g max %.6g\n", fm_wigner_integral(w.get()),
                    fm_wigner_purity(w.get()), lo, hi);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchCmd {
    Output out;
    double n = 20.0;

    void add(CLI::App *app) {
        app->add_option("--n", n, "Total mean photon number N")->capture_default_str()->check(CLI::PositiveNumber);
        out.add(app);
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        fm_bounds b;
        check(fm_compute_bounds(n, &b));
        std::printf("N = %g\n  SQL  1/F = %.6g\n  TFS  1/F = %.6g\n  HL   1/F = %.6g\n", n, b.sql_inv_fi, b.tfs_inv_fi,
                    b.hl_inv_fi);
        CsvWriter csv(out.path("bench.csv"), hash, {"N", "sql_inv_fi", "tfs_inv_fi", "hl_inv_fi"});
        csv.row({num(n), num(b.sql_inv_fi), num(b.tfs_inv_fi), num(b.hl_inv_fi)});
        csv.close();
        return 0;
    }
};

// ---------------------------------------------------------------------------
// theta-sweep
// ---------------------------------------------------------------------------

struct ThetaCmd {
    Output out;
    Physics phys;
    std::optional<double> time;
    std::size_t points = 200;
    std::string frame = "reference-arm";
    double degeneracy = 0.1;
    std::vector<double> ns;

    void add(CLI::App *app) {
        phys.add(app);
        out.add(app);
        app->add_option("--time", time, "Probe time (default: first QFI minimum for jc, pi/4 for kerr)");
        app->add_option("--points", points, "Angles over [0, 2 pi)")->capture_default_str()->check(
            CLI::Range(3, 100000));
        app->add_option("--frame", frame, "Quadrature frame: reference-arm or encoded")
            ->capture_default_str()
            ->check(CLI::IsMember({"reference-arm", "encoded"}));
        app->add_option("--degeneracy", degeneracy, "Tolerance for equal minima, as a fraction of the curve depth")->capture_default_str();
        app->add_option("--ns", ns, "Several photon numbers")->delimiter(',')->check(CLI::PositiveNumber);
    }

    double probe_time(double n, const fm_sweep_options &o) const {
        if (time) {
            return *time;
        }
        if (phys.fm() == FM_KIND_KERR) {
            return std::numbers::pi / 4.0;
        }
        std::vector<double> grid;
        for (int i = 0; i <= 150; ++i) {
            grid.push_back(0.1 * i);
        }
        fm_sweep_options qo = o;
        qo.homodyne = 0;
        SweepHandle s;
        check(fm_sweep_run(phys.fm(), n, grid.data(), grid.size(), &qo, s.out()));
        if (fm_sweep_minima_count(s.get()) == 0) {
            throw RuntimeFailure("no QFI minimum found in [0, 15]; pass --time");
        }
        fm_extremum e;
        check(fm_sweep_minimum_at(s.get(), 0, &e));
        return e.time;
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        fm_sweep_options o;
        fm_sweep_options_default(&o);
        o.cutoff = phys.cutoff;
        o.phi = phys.phi;
        o.delta = phys.delta;
        o.frame = kFrames.at(frame);
        o.workers = out.workers;
        std::vector<double> thetas(points);
        for (std::size_t i = 0; i < points; ++i) {
            thetas[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
        }
        CsvWriter csv(out.path("theta_" + phys.kind + ".csv"), hash, {"kind", "N", "probe_time", "theta", "inv_cfi"});
        CsvWriter best(out.path("theta_min_" + phys.kind + ".csv"), hash,
                       {"kind", "N", "probe_time", "theta_min", "inv_cfi_min"});
        for (double n : ns.empty() ? std::vector<double>{phys.n} : ns) {
            const double t = probe_time(n, o);
            std::vector<double> inv(points);
            double theta_min = 0.0, inv_min = 0.0;
            check(fm_theta_sweep(phys.fm(), n, t, thetas.data(), thetas.size(), &o, degeneracy, inv.data(), &theta_min,
                                 &inv_min));
            for (std::size_t i = 0; i < points; ++i) {
                csv.row({phys.kind, num(n), num(t), num(thetas[i]), num(inv[i])});
            }
            best.row({phys.kind, num(n), num(t), num(theta_min), num(inv_min)});
            std::printf("%s N=%g time %.6g: theta_min = %.4f pi, 1/F_C = %.6g\n", phys.kind.c_str(), n, t,
                        theta_min / std::numbers::pi, inv_min);
        }
        csv.close();
        best.close();
        return 0;
    }
};

// ---------------------------------------------------------------------------
// ablate
// ---------------------------------------------------------------------------

struct AblateCmd {
    Output out;
    Physics phys;
    Optimizer opt;

    void add(CLI::App *app) {
        phys.add(app);
        out.add(app);
        opt.add(app, 6);
    }

    int run(const CLI::App *app) {
        const std::string hash = write_manifest_for(app, out);
        const fm_problem problem = phys.problem();
        const auto schedule = opt.schedule();
        const fm_optimizer_config config = opt.config(out.workers);
        OptHandle prep;
        check(fm_optimize_preparation(&problem, schedule.data(), schedule.size(), &config, prep.out()));
        CsvWriter csv(out.path("ablation_" + phys.kind + ".csv"), hash,
                      {"kind", "N", "d", "inv_qfi", "inv_cfi_theta_zero", "inv_cfi_theta_free",
                       "inv_cfi_theta_zero_pqc", "inv_cfi_theta_free_pqc"});
        for (std::size_t d : schedule) {
            const double *params = nullptr;
            std::size_t count = 0;
            double best = 0.0;
            for (std::size_t i = 0; i < fm_opt_result_size(prep.get()); ++i) {
                fm_opt_record r;
                check(fm_opt_result_at(prep.get(), i, &r));
                if (r.d == d && r.error == nullptr && (params == nullptr || r.objective < best)) {
                    params = r.params;
                    count = r.param_count;
                    best = r.objective;
                }
            }
            if (params == nullptr) {
                throw RuntimeFailure("every preparation seed failed at depth " + std::to_string(d));
            }
            fm_ablation_record a;
            check(fm_ablation_theta(&problem, params, count, &config, &a));
            csv.row({phys.kind, num(phys.n), std::to_string(d), num(a.inv_qfi), num(a.inv_cfi_theta_zero),
                     num(a.inv_cfi_theta_free), num(a.inv_cfi_theta_zero_pqc), num(a.inv_cfi_theta_free_pqc)});
            std::printf("d=%zu 1/F_Q %.5g | theta=0 %.5g | theta free %.5g | theta=0 + PQC %.5g | free + PQC %.5g\n", d,
                        a.inv_qfi, a.inv_cfi_theta_zero, a.inv_cfi_theta_free, a.inv_cfi_theta_zero_pqc,
                        a.inv_cfi_theta_free_pqc);
        }
        csv.close();
        return 0;
    }
};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Photonic phase-estimation toolkit: continuous and programmable nonlinear probe preparation"};
    app.config_formatter(std::make_shared<ConfigJson>());
    app.set_config("--config", "", "JSON configuration file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::ignore);
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(fm_version()));

    SweepCmd sweep;
    OptimizeCmd optimize;
    WignerCmd wigner;
    BenchCmd bench;
    ThetaCmd theta;
    AblateCmd ablate;
    CLI::App *sweep_app = app.add_subcommand("sweep", "Continuous-evolution sweep of inverse Fisher information");
    CLI::App *optimize_app = app.add_subcommand("optimize", "Optimize preparation and pre-measurement circuits");
    CLI::App *wigner_app = app.add_subcommand("wigner", "Single-mode Wigner function grid");
    CLI::App *bench_app = app.add_subcommand("bench", "Reference precision bounds");
    CLI::App *theta_app = app.add_subcommand("theta-sweep", "Homodyne quadrature-angle scan");
    CLI::App *ablate_app = app.add_subcommand("ablate", "Homodyne strategy comparison per depth");
    sweep.add(sweep_app);
    optimize.add(optimize_app);
    wigner.add(wigner_app);
    bench.add(bench_app);
    theta.add(theta_app);
    ablate.add(ablate_app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (sweep_app->parsed()) {
            return sweep.run(sweep_app);
        }
        if (optimize_app->parsed()) {
            return optimize.run(optimize_app);
        }
        if (wigner_app->parsed()) {
            return wigner.run(wigner_app);
        }
        if (bench_app->parsed()) {
            return bench.run(bench_app);
        }
        if (theta_app->parsed()) {
            return theta.run(theta_app);
        }
        if (ablate_app->parsed()) {
            return ablate.run(ablate_app);
        }
    } catch (const RuntimeFailure &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const IoError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}

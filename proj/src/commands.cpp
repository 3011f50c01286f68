#include "ndextrap/commands.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "ndextrap/engine.hpp"
#include "ndextrap/io.hpp"
#include "ndextrap/kernels.hpp"
#include "ndextrap/spectral.hpp"
#include "ndextrap/synthesis.hpp"

namespace ndextrap::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json number_or_string(double v) {
    return std::isfinite(v) ? json(v) : json(format_double(v));
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        err << "format error: " << e.what();
        if (e.offset() >= 0) {
            err << " (byte offset " << e.offset() << ")";
        }
        err << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

fs::path prepare_output(const ExperimentConfig& cfg) {
    fs::path dir(cfg.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

std::vector<EigenSpectrum> region_spectra(const Scenario& sc, std::size_t count, double tol, bool keep_vectors) {
    std::vector<EigenSpectrum> out;
    for (std::size_t m = 0; m < sc.regions.size(); ++m) {
        EigenOptions opts;
        opts.region_index = m;
        opts.keep_vectors = keep_vectors;
        out.push_back(eigen_spectrum(sc.regions.regions()[m], sc.support, count, tol, opts));
    }
    return out;
}

}  // namespace

ExperimentConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
    if (path.empty()) {
        throw ConfigError(std::vector<ConfigIssue>{{"--config", "a configuration file is required"}});
    }
    ExperimentConfig cfg = parse_config(read_text_file(path));
    if (seed_override) {
        cfg.synthesis.seed = *seed_override;
    }
    return cfg;
}

Scenario build_scenario(const ExperimentConfig& cfg) {
    const GridShape shape(cfg.grid);
    SpectralSupport support = make_spectral_support(shape, cfg.half_bandwidth);
    std::vector<Region> regions;
    for (const RectSpec& r : cfg.regions) {
        regions.push_back(region_from_rect(shape, r.corner, r.extent));
    }
    std::vector<double> weights;
    switch (cfg.weights.mode) {
        case WeightMode::uniform:
            weights = uniform_weights(regions.size());
            break;
        case WeightMode::explicit_values:
            weights = cfg.weights.values;
            break;
        case WeightMode::suggested: {
            std::vector<EigenSpectrum> spectra;
            for (std::size_t m = 0; m < regions.size(); ++m) {
                EigenOptions opts;
                opts.region_index = m;
                opts.keep_vectors = false;
                spectra.push_back(eigen_spectrum(regions[m], support, cfg.weights.order + 1, cfg.eigen.tol, opts));
            }
            weights = suggest_weights(spectra, cfg.weights.order);
            break;
        }
    }
    WeightedRegionSet set = validate_weighted_regions(std::move(regions), std::move(weights));
    Signal truth = random_bandlimited({support, cfg.synthesis.seed, cfg.synthesis.rms});
    Signal observed = cfg.synthesis.noise ? add_out_of_band_noise(truth, support, cfg.synthesis.noise->snr_db,
                                                                  cfg.synthesis.noise_seed(),
                                                                  cfg.synthesis.noise->params)
                                          : truth;
    MeasuredSignal meas = MeasuredSignal::measure(observed, set);
    return Scenario{cfg, std::move(support), std::move(set), std::move(truth), std::move(observed), std::move(meas)};
}

int synth(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ExperimentConfig cfg = load_config(opts.config, opts.seed);
        const Scenario sc = build_scenario(cfg);
        const fs::path dir = prepare_output(cfg);
        write_signal(sc.truth, dir / "h.ndsig");
        write_signal(sc.observed, dir / "observed.ndsig");
        write_signal(sc.measurement.samples(), dir / "measurements.ndsig");
        if (cfg.output.pgm) {
            export_pgm(sc.truth, dir / "h.pgm");
            export_pgm(sc.measurement.samples(), dir / "measurements.pgm");
        }
        if (!opts.quiet) {
            out << "wrote h.ndsig, observed.ndsig, measurements.ndsig to " << dir.string() << "\n";
            if (cfg.synthesis.noise) {
                out << "out-of-band SNR " << snr_in_out(sc.observed, sc.support) << " dB\n";
            }
        }
        return kExitOk;
    });
}

int run(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ExperimentConfig cfg = load_config(opts.config, opts.seed);
        const Scenario sc = build_scenario(cfg);
        const fs::path dir = prepare_output(cfg);
        try {
            const IterationReport rep = run_extrapolation(sc.measurement, sc.support, cfg.run_config(), sc.truth);
            write_signal(rep.estimate, dir / "f_e.ndsig");
            write_metrics_csv(rep, dir / "metrics.csv");
            if (cfg.output.pgm) {
                export_pgm(sc.truth, dir / "h.pgm");
                export_pgm(rep.estimate, dir / "f_e.pgm");
            }
            if (!opts.quiet) {
                const auto& last = rep.records.back();
                out << to_string(cfg.mode) << " run stopped after " << rep.iterations << " iterations ("
                    << to_string(rep.stop) << "), NMSE " << format_double(last.nmse_db.value_or(NAN)) << " dB\n";
            }
        } catch (const DivergenceError& e) {
            if (e.last_report() && !e.last_report()->records.empty()) {
                write_metrics_csv(*e.last_report(), dir / "metrics.csv");
            }
            throw;
        }
        return kExitOk;
    });
}

int eigen(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ExperimentConfig cfg = load_config(opts.config, opts.seed);
        const Scenario sc = build_scenario(cfg);
        const fs::path dir = prepare_output(cfg);
        const std::size_t order = cfg.eigen.order;
        const auto spectra = region_spectra(sc, cfg.eigen.count, cfg.eigen.tol, true);

        std::ostringstream ev;
        ev << "region,n,eigenvalue,residual\n";
        for (const EigenSpectrum& s : spectra) {
            for (std::size_t n = 0; n < s.eigenvalues.size(); ++n) {
                ev << s.region_index << ',' << n << ',' << format_double(s.eigenvalues[n]) << ','
                   << format_double(s.residuals[n]) << '\n';
            }
        }
        write_text_file(dir / "eigen.csv", ev.str());

        std::ostringstream lt;
        lt << "region,weight,order,lambda_0,lambda_N,lipschitz_unregularized,measured_unregularized,tau_upper_bound,"
              "lipschitz_regularized,measured_regularized\n";
        const auto& weights = sc.regions.weights();
        for (const EigenSpectrum& s : spectra) {
            const Region& region = sc.regions.regions()[s.region_index];
            const auto unreg = estimate_contraction(s, region, sc.support, order);
            const double bound = tau_upper_bound(s, order, cfg.regularization ? cfg.regularization->mu : 0.0);
            lt << s.region_index << ',' << format_double(weights[s.region_index]) << ',' << order << ','
               << format_double(s.lambda(0)) << ',' << format_double(s.lambda(order)) << ','
               << format_double(unreg.predicted) << ',' << format_double(unreg.measured) << ','
               << format_double(bound) << ',';
            if (cfg.regularization && cfg.regularization->tau <= bound) {
                const auto reg = estimate_contraction(s, region, sc.support, order, cfg.regularization);
                lt << format_double(reg.predicted) << ',' << format_double(reg.measured);
            } else {
                lt << ',';
            }
            lt << '\n';
        }
        lt << "combined," << format_double(sc.regions.weight_sum()) << ',' << order << ",,,"
           << format_double(combined_lipschitz(spectra, weights, order)) << ",,,,\n";
        write_text_file(dir / "lipschitz.csv", lt.str());
        if (!opts.quiet) {
            out << "wrote eigen.csv and lipschitz.csv for " << spectra.size() << " region(s) to " << dir.string()
                << "\n";
        }
        return kExitOk;
    });
}

int oracle(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ExperimentConfig cfg = load_config(opts.config, opts.seed);
        const Scenario sc = build_scenario(cfg);
        const fs::path dir = prepare_output(cfg);
        const IterationReport rep = run_extrapolation(sc.measurement, sc.support, cfg.run_config(), sc.truth);

        auto rel_diff = [](const Signal& a, const Signal& b) {
            const double ref = std::sqrt(kernels::sum_squares(b.values()));
            const double d = std::sqrt(kernels::distance_squared(a.values(), b.values()));
            return ref > 0.0 ? d / ref : d;
        };

        json doc;
        doc["iterate"] = {{"mode", to_string(cfg.mode)},
                          {"iterations", rep.iterations},
                          {"stop", to_string(rep.stop)},
                          {"nmse_db", number_or_string(nmse(sc.truth, rep.estimate))}};
        const OracleResult ls = least_squares_oracle(sc.measurement, sc.support);
        write_signal(ls.solution, dir / "oracle_ls.ndsig");
        doc["dimension"] = ls.dimension;
        doc["least_squares"] = {{"condition_number", number_or_string(ls.condition_number)},
                                {"ill_posed", ls.ill_posed},
                                {"nmse_db", number_or_string(nmse(sc.truth, ls.solution))},
                                {"relative_difference_to_iterate", rel_diff(rep.estimate, ls.solution)}};
        if (cfg.regularization) {
            const OracleResult tk = tikhonov_oracle(sc.measurement, sc.support, cfg.regularization->mu);
            write_signal(tk.solution, dir / "oracle_tikhonov.ndsig");
            doc["tikhonov"] = {{"mu", cfg.regularization->mu},
                               {"condition_number", number_or_string(tk.condition_number)},
                               {"nmse_db", number_or_string(nmse(sc.truth, tk.solution))},
                               {"relative_difference_to_iterate", rel_diff(rep.estimate, tk.solution)}};
        }
        write_text_file(dir / "oracle.json", doc.dump(2) + "\n");
        if (!opts.quiet) {
            out << doc.dump(2) << "\n";
            if (ls.ill_posed) {
                out << "warning: least-squares system is ill-posed (condition "
                    << format_double(ls.condition_number) << "); discrete recovery is not unique\n";
            }
        }
        return kExitOk;
    });
}

int report(const fs::path& metrics, bool quiet, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto records = read_metrics_csv(metrics);
        if (records.empty()) {
            throw FormatError("metrics file has no records");
        }
        const IterationRecord& last = records.back();
        out << "records: " << records.size() << "\n";
        out << "final iteration: " << last.iteration << "\n";
        out << "final residual: " << format_double(last.residual) << "\n";
        if (last.nmse_db) {
            out << "final nmse_db: " << format_double(*last.nmse_db) << "\n";
            double best = *last.nmse_db;
            for (const auto& r : records) {
                if (r.nmse_db) {
                    best = std::min(best, *r.nmse_db);
                }
            }
            out << "best nmse_db: " << format_double(best) << "\n";
            if (!quiet) {
                for (double threshold : {-10.0, -20.0, -30.0, -40.0, -60.0}) {
                    out << "iterations to " << threshold << " dB: ";
                    auto it = std::find_if(records.begin(), records.end(), [&](const IterationRecord& r) {
                        return r.nmse_db && *r.nmse_db <= threshold;
                    });
                    if (it == records.end()) {
                        out << "not reached\n";
                    } else {
                        out << it->iteration << "\n";
                    }
                }
            }
        } else {
            out << "final nmse_db: (no ground truth recorded)\n";
        }
        return kExitOk;
    });
}

}  // namespace ndextrap::app

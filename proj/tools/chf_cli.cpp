// Command-line driver: trains CHF models, evaluates them on tube data,
// and runs bundle cases through the subchannel solver. Every run is
// deterministic for a fixed seed; output files carry no timestamps, so
// identical invocations produce byte-identical artifacts.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chf/correlations.hpp"
#include "chf/dataset.hpp"
#include "chf/errors.hpp"
#include "chf/hybrid.hpp"
#include "chf/lut.hpp"
#include "chf/metrics.hpp"
#include "chf/mlp.hpp"
#include "chf/model.hpp"
#include "chf/props.hpp"
#include "chf/random.hpp"
#include "chf/registry.hpp"
#include "chf/subchannel.hpp"

namespace fs = std::filesystem;
using namespace chf;

namespace {

// ---------------------------------------------------------------------------
// Small helpers

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> parse_hidden(const std::string& csv) {
    std::vector<int> out;
    for (const std::string& tok : split_list(csv)) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw InputError("bad --hidden entry '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError("--hidden needs at least one width");
    return out;
}

std::vector<double> parse_doubles(const std::string& csv,
                                  const std::string& flag) {
    std::vector<double> out;
    for (const std::string& tok : split_list(csv)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw InputError("bad " + flag + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError(flag + " needs at least one value");
    return out;
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' &&
            c != '_')
            c = '_';
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw InputError("cannot create output directory " + p.string());
    return p;
}

std::vector<std::shared_ptr<const ChfModel>> make_models(
    const std::string& ids_csv, const ModelPaths& paths) {
    const auto ids = split_list(ids_csv);
    if (ids.empty()) throw InputError("--models needs at least one entry");
    std::vector<std::shared_ptr<const ChfModel>> out;
    std::vector<std::string> names;
    for (const std::string& id : ids) {
        auto m = make_model(id, paths);
        if (std::find(names.begin(), names.end(), m->name()) != names.end())
            throw InputError("duplicate model name '" + m->name() +
                             "' in --models");
        names.push_back(m->name());
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
    std::string data;
    std::string model_id = "pure-ml";
    std::string props;
    std::string lut;
    std::string out_dir = ".";
    uint64_t seed = 0;
    int epochs = 500;
    int batch = 64;
    double lr = 1e-2;
    double decay = 0.99;
    int patience = 20;
    double min_delta = 1e-5;
    double l2 = 1e-4;
    std::string hidden = "16,16";
    std::string activation = "relu";
    double f_val = 0.05;
    double f_test = 0.05;
    int search = 0;
};

TrainConfig base_config(const TrainOptions& opt) {
    TrainConfig cfg;
    cfg.max_epochs = opt.epochs;
    cfg.batch_size = opt.batch;
    cfg.learning_rate = opt.lr;
    cfg.decay = opt.decay;
    cfg.patience = opt.patience;
    cfg.min_delta = opt.min_delta;
    cfg.l2_strength = opt.l2;
    cfg.seed = opt.seed;
    cfg.hidden = parse_hidden(opt.hidden);
    cfg.activation = activation_from_string(opt.activation);
    return cfg;
}

/// Seeded random search over a documented box: 1-2 hidden layers of
/// width {8, 16, 32}, lr log-uniform in [1e-3, 10^-1.5], batch in
/// {32, 64, 128}, L2 log-uniform in [1e-6, 1e-3], both activations.
TrainConfig draw_trial(const TrainConfig& base, Rng& rng, uint64_t trial) {
    TrainConfig cfg = base;
    const int widths[] = {8, 16, 32};
    const int batches[] = {32, 64, 128};
    const int n_layers = 1 + static_cast<int>(rng.uniform(0.0, 2.0));
    cfg.hidden.clear();
    for (int l = 0; l < n_layers; ++l)
        cfg.hidden.push_back(widths[static_cast<int>(rng.uniform(0.0, 3.0))]);
    cfg.learning_rate = std::pow(10.0, rng.uniform(-3.0, -1.5));
    cfg.batch_size = batches[static_cast<int>(rng.uniform(0.0, 3.0))];
    cfg.l2_strength = std::pow(10.0, rng.uniform(-6.0, -3.0));
    cfg.activation =
        rng.uniform(0.0, 1.0) < 0.5 ? Activation::kRelu : Activation::kTanh;
    cfg.seed = base.seed + trial + 1;
    return cfg;
}

int cmd_train(const TrainOptions& opt) {
    const fs::path out_dir = prepare_out_dir(opt.out_dir);

    const IngestReport ingest = ingest_csv(opt.data);
    for (const std::string& w : ingest.warnings)
        std::cout << "warning: " << w << "\n";
    std::cout << "ingested " << ingest.points.size() << " points (dropped "
              << ingest.dropped << ")\n";

    SplitSpec spec;
    spec.f_val = opt.f_val;
    spec.f_test = opt.f_test;
    spec.f_train = 1.0 - opt.f_val - opt.f_test;
    spec.seed = opt.seed;
    const SplitResult parts = split(ingest.points, spec);
    std::cout << "split train/val/test = " << parts.train.size() << "/"
              << parts.val.size() << "/" << parts.test.size() << "\n";

    const bool is_hybrid = opt.model_id.rfind("hybrid-", 0) == 0;
    if (!is_hybrid && opt.model_id != "pure-ml")
        throw InputError("train: --model must be pure-ml, hybrid-bowring or "
                         "hybrid-lut, got '" + opt.model_id + "'");

    ModelPaths paths{opt.props, opt.lut, ""};
    std::shared_ptr<const ChfModel> base;
    if (is_hybrid) {
        const std::string base_id =
            opt.model_id == "hybrid-bowring" ? "base-bowring" : "base-lut";
        if (opt.model_id != "hybrid-bowring" && opt.model_id != "hybrid-lut")
            throw InputError("train: unknown hybrid '" + opt.model_id + "'");
        base = make_model(base_id, paths);
    }

    auto targets = [&](const std::vector<ChfPoint>& pts) {
        std::vector<TrainSample> samples = to_train_samples(pts);
        if (!is_hybrid) return samples;
        return residual_training_set(build_residual_dataset(*base, samples));
    };
    const std::vector<TrainSample> train_set = targets(parts.train);
    const std::vector<TrainSample> val_set = targets(parts.val);

    const TrainConfig cfg0 = base_config(opt);
    TrainResult best = [&] {
        if (opt.search <= 0) return train(train_set, val_set, cfg0);
        Rng search_rng(opt.seed);
        TrainResult winner;
        double winner_loss = std::numeric_limits<double>::infinity();
        for (int t = 0; t < opt.search; ++t) {
            const TrainConfig cfg =
                draw_trial(cfg0, search_rng, static_cast<uint64_t>(t));
            TrainResult r = train(train_set, val_set, cfg);
            std::cout << "trial " << t << ": val mse "
                      << fmt(r.report.best_val_loss) << "\n";
            if (r.report.best_val_loss < winner_loss) {
                winner_loss = r.report.best_val_loss;
                winner = std::move(r);
            }
        }
        return winner;
    }();

    std::cout << "trained " << opt.model_id << ": best epoch "
              << best.report.best_epoch << ", val mse "
              << fmt(best.report.best_val_loss) << ", epochs run "
              << best.report.epochs_run << "\n";

    const std::string weights_name = sanitize(opt.model_id) + ".weights";
    const fs::path weights_path = out_dir / weights_name;
    save_weights(best.model, best.standardizer, weights_path.string());
    std::cout << "wrote " << weights_path.string() << "\n";

    if (is_hybrid) {
        // Data paths are stored absolute so the manifest works from any
        // directory; the weight file sits beside it and stays relative.
        auto absolutize = [](const std::string& p) {
            return p.empty()
                       ? p
                       : fs::absolute(p).lexically_normal().string();
        };
        HybridManifest man;
        man.name = opt.model_id;
        man.base = opt.model_id == "hybrid-bowring" ? "base-bowring"
                                                    : "base-lut";
        man.props_path = absolutize(opt.props);
        man.lut_path = absolutize(opt.lut);
        man.weights_path = weights_name;   // lives beside the manifest
        const fs::path man_path = out_dir / (sanitize(opt.model_id) +
                                             ".manifest");
        save_hybrid_manifest(man, man_path.string());
        std::cout << "wrote " << man_path.string() << "\n";
    }

    {
        std::ofstream hist = open_out(out_dir / "training_history.csv");
        hist << "epoch,val_mse\n";
        for (size_t e = 0; e < best.report.loss_history.size(); ++e)
            hist << e << "," << fmt(best.report.loss_history[e]) << "\n";
    }

    // Holdout metrics with the complete model (base + residual for
    // hybrids), on points the optimizer never saw.
    if (!parts.test.empty()) {
        std::shared_ptr<const ChfModel> full;
        if (is_hybrid)
            full = std::make_shared<HybridModel>(base, best.model,
                                                 best.standardizer,
                                                 opt.model_id);
        else
            full = std::make_shared<MlpChfModel>(best.model,
                                                 best.standardizer);
        std::vector<double> pred, expv;
        for (const ChfPoint& pt : parts.test) {
            pred.push_back(full->predict(pt.state).chf_kwm2);
            expv.push_back(pt.exp_chf_kwm2);
        }
        const MetricsReport m = compute_metrics(pred, expv);
        std::ofstream out = open_out(out_dir / "holdout_metrics.csv");
        out << "model,n,mu_pct,med_pct,max_pct,std_pct,f10_pct,f25_pct\n";
        out << opt.model_id << "," << m.n << "," << fmt(m.mu_pct) << ","
            << fmt(m.med_pct) << "," << fmt(m.max_pct) << ","
            << fmt(m.std_pct) << "," << fmt(m.f10_pct) << ","
            << fmt(m.f25_pct) << "\n";
        std::cout << "holdout: n=" << m.n << " mu=" << fmt(m.mu_pct)
                  << "% med=" << fmt(m.med_pct) << "% max=" << fmt(m.max_pct)
                  << "%\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// eval-tubes

struct EvalOptions {
    std::string data;
    std::string models;
    std::string props;
    std::string lut;
    std::string weights;
    std::string out_dir = ".";
    int nodes = 60;
    double default_length = 2.0;
};

/// Reconstructs the local state at the top of a uniformly heated tube
/// whose wall flux equals the measured CHF: the inlet enthalpy is chosen
/// so the heat balance lands on the recorded exit quality, and the march
/// is run frictionless so pressure stays at the recorded value.
LocalState tube_exit_state(const ChfPoint& pt, const PropertyTable& props,
                           int nodes, double default_length) {
    const double d = pt.state.d_he_m;
    const double area = M_PI * d * d / 4.0;
    const double perim = M_PI * d;
    const double length = pt.has_lh ? pt.lh_m : default_length;

    BundleCase tube;
    tube.name = "tube";
    tube.channels.push_back({area, perim, perim});
    tube.rods.push_back({1.0});
    tube.rod_surfaces.push_back({0, 0, 1.0});
    tube.heated_length_m = length;
    tube.n_axial = nodes;
    tube.l_obs_m = length;
    tube.p_in_kpa = pt.state.p_kpa;
    tube.g_in_kgm2s = pt.state.g_kgm2s;
    tube.power_kw = pt.exp_chf_kwm2 * perim * length;
    tube.beta_sp = 0.0;
    tube.friction = 0.0;

    const SatProps sat = props.saturation(pt.state.p_kpa);
    const double h_exit = sat.h_f + pt.state.x_e * sat.h_fg;
    tube.h_in_kjkg = h_exit - pt.exp_chf_kwm2 * perim * length /
                                  (pt.state.g_kgm2s * area);

    const MarchResult res = march(tube, props);
    const double x_out = equilibrium_quality(res.outlet_h_kjkg[0], sat);
    return {d, pt.state.p_kpa, pt.state.g_kgm2s, x_out};
}

int cmd_eval_tubes(const EvalOptions& opt) {
    const fs::path out_dir = prepare_out_dir(opt.out_dir);
    if (opt.props.empty())
        throw InputError("eval-tubes: --props is required (tube heat "
                         "balance needs saturation properties)");
    const auto props = load_props_shared(opt.props);

    const ModelPaths paths{opt.props, opt.lut, opt.weights};
    const auto models = make_models(opt.models, paths);

    const IngestReport ingest = ingest_csv(opt.data);
    for (const std::string& w : ingest.warnings)
        std::cout << "warning: " << w << "\n";
    if (ingest.points.empty()) throw InputError("eval-tubes: no data points");
    std::cout << "evaluating " << models.size() << " model(s) on "
              << ingest.points.size() << " points (dropped "
              << ingest.dropped << ")\n";

    std::vector<LocalState> states;
    states.reserve(ingest.points.size());
    for (const ChfPoint& pt : ingest.points)
        states.push_back(
            tube_exit_state(pt, *props, opt.nodes, opt.default_length));

    std::ofstream pred_out = open_out(out_dir / "predictions.csv");
    pred_out << "Dhe_m,P_kPa,G_kgm2s,x,chf_kWm2";
    for (const auto& m : models) pred_out << ",pred_" << m->name() << "_kWm2";
    pred_out << "\n";

    std::vector<std::vector<double>> preds(models.size());
    std::vector<size_t> n_extrap(models.size(), 0);
    std::vector<size_t> n_nonpos(models.size(), 0);
    for (size_t i = 0; i < ingest.points.size(); ++i) {
        const ChfPoint& pt = ingest.points[i];
        pred_out << fmt(pt.state.d_he_m) << "," << fmt(pt.state.p_kpa) << ","
                 << fmt(pt.state.g_kgm2s) << "," << fmt(pt.state.x_e) << ","
                 << fmt(pt.exp_chf_kwm2);
        for (size_t m = 0; m < models.size(); ++m) {
            const ChfEstimate est = models[m]->predict(states[i]);
            preds[m].push_back(est.chf_kwm2);
            if (est.extrapolated) ++n_extrap[m];
            if (est.non_positive) ++n_nonpos[m];
            pred_out << "," << fmt(est.chf_kwm2);
        }
        pred_out << "\n";
    }

    std::vector<double> expv;
    expv.reserve(ingest.points.size());
    for (const ChfPoint& pt : ingest.points) expv.push_back(pt.exp_chf_kwm2);

    std::ofstream met_out = open_out(out_dir / "metrics.csv");
    met_out << "model,n,mu_pct,med_pct,max_pct,std_pct,f10_pct,f25_pct,"
               "n_extrapolated,n_nonpositive\n";
    for (size_t m = 0; m < models.size(); ++m) {
        const MetricsReport r = compute_metrics(preds[m], expv);
        met_out << models[m]->name() << "," << r.n << "," << fmt(r.mu_pct)
                << "," << fmt(r.med_pct) << "," << fmt(r.max_pct) << ","
                << fmt(r.std_pct) << "," << fmt(r.f10_pct) << ","
                << fmt(r.f25_pct) << "," << n_extrap[m] << "," << n_nonpos[m]
                << "\n";
        std::cout << models[m]->name() << ": mu=" << fmt(r.mu_pct)
                  << "% med=" << fmt(r.med_pct) << "% max=" << fmt(r.max_pct)
                  << "% std=" << fmt(r.std_pct) << "% F10=" << fmt(r.f10_pct)
                  << "% F25=" << fmt(r.f25_pct) << "%\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// run-bundle / beta-sweep / report

struct BundleOptions {
    std::string case_file;
    std::string models;
    std::string props;
    std::string lut;
    std::string weights;
    std::string out_dir = ".";
    std::string betas = "0,0.002,0.0044,0.01";
    int channel = -1;
};

void write_profile(const fs::path& path, const CaseResult& res) {
    std::ofstream out = open_out(path);
    out << "channel,z_m,P_kPa,G_kgm2s,x,qpp_kWm2,chf_kWm2,dnbr\n";
    for (size_t c = 0; c < res.profile.size(); ++c) {
        const ChannelProfile& prof = res.profile[c];
        for (size_t k = 0; k < prof.nodes.size(); ++k) {
            const NodeState& n = prof.nodes[k];
            out << c << "," << fmt(n.z_m) << "," << fmt(n.p_kpa) << ","
                << fmt(n.g_kgm2s) << "," << fmt(n.x_e) << ","
                << fmt(n.qpp_kwm2) << "," << fmt(prof.chf_kwm2[k]) << ","
                << fmt(prof.dnbr[k]) << "\n";
        }
    }
}

int cmd_run_bundle(const BundleOptions& opt) {
    const fs::path out_dir = prepare_out_dir(opt.out_dir);
    const BundleCase bundle = BundleCase::load(opt.case_file);
    if (opt.props.empty())
        throw InputError("run-bundle: --props is required");
    const auto props = load_props_shared(opt.props);
    const ModelPaths paths{opt.props, opt.lut, opt.weights};
    const auto models = make_models(opt.models, paths);

    std::ofstream summary = open_out(out_dir / "summary.csv");
    summary << "model,limiting_channel,min_dnbr,critical_found,l_cr_m,"
               "chf_at_obs_kWm2,exp_chf_kWm2,mag_err_pct,loc_err_pct\n";

    for (const auto& model : models) {
        const CaseResult res = solve_case(bundle, *props, *model);
        write_profile(out_dir / ("profile_" + sanitize(model->name()) +
                                 ".csv"),
                      res);

        summary << model->name() << "," << res.limiting_channel << ","
                << fmt(res.min_dnbr) << "," << (res.critical.found ? 1 : 0)
                << ",";
        if (res.critical.found) summary << fmt(res.critical.l_cr_m);
        summary << "," << fmt(res.chf_at_obs_kwm2) << ",";
        if (bundle.exp_chf_kwm2 > 0.0) {
            summary << fmt(bundle.exp_chf_kwm2) << ","
                    << fmt(100.0 *
                           (res.chf_at_obs_kwm2 - bundle.exp_chf_kwm2) /
                           bundle.exp_chf_kwm2)
                    << ",";
            if (res.critical.found && bundle.l_obs_m > 0.0)
                summary << fmt(100.0 *
                               (res.critical.l_cr_m - bundle.l_obs_m) /
                               bundle.l_obs_m);
        } else {
            summary << ",,";
        }
        summary << "\n";

        std::cout << model->name() << ": min DNBR " << fmt(res.min_dnbr)
                  << " in channel " << res.limiting_channel;
        if (res.critical.found)
            std::cout << ", L_cr " << fmt(res.critical.l_cr_m) << " m";
        else
            std::cout << ", no DNBR<1 crossing";
        std::cout << ", CHF@L_obs " << fmt(res.chf_at_obs_kwm2)
                  << " kW/m2\n";
    }
    if (bundle.synthetic)
        std::cout << "note: case '" << bundle.name
                  << "' carries synthetic operating conditions\n";
    return 0;
}

int cmd_beta_sweep(const BundleOptions& opt) {
    const fs::path out_dir = prepare_out_dir(opt.out_dir);
    const BundleCase bundle = BundleCase::load(opt.case_file);
    if (opt.props.empty())
        throw InputError("beta-sweep: --props is required");
    const auto props = load_props_shared(opt.props);
    const ModelPaths paths{opt.props, opt.lut, opt.weights};
    const auto models = make_models(opt.models, paths);
    if (models.size() != 1)
        throw InputError("beta-sweep: exactly one model, got " +
                         std::to_string(models.size()));
    const std::vector<double> betas = parse_doubles(opt.betas, "--betas");

    const auto points = beta_sensitivity(bundle, *props, *models[0], betas);

    std::ofstream out = open_out(out_dir / "beta_sweep.csv");
    out << "beta,chf_at_obs_kWm2,critical_found,l_cr_m\n";
    for (const BetaPoint& p : points) {
        out << fmt(p.beta_sp) << "," << fmt(p.chf_at_obs_kwm2) << ","
            << (p.critical_found ? 1 : 0) << ",";
        if (p.critical_found) out << fmt(p.l_cr_m);
        out << "\n";
        std::cout << "beta " << fmt(p.beta_sp) << ": CHF@L_obs "
                  << fmt(p.chf_at_obs_kwm2) << " kW/m2";
        if (p.critical_found)
            std::cout << ", L_cr " << fmt(p.l_cr_m) << " m";
        std::cout << "\n";
    }
    return 0;
}

int cmd_report(const BundleOptions& opt) {
    const fs::path out_dir = prepare_out_dir(opt.out_dir);
    const BundleCase bundle = BundleCase::load(opt.case_file);
    if (opt.props.empty()) throw InputError("report: --props is required");
    const auto props = load_props_shared(opt.props);
    const ModelPaths paths{opt.props, opt.lut, opt.weights};
    const auto models = make_models(opt.models, paths);

    std::vector<CaseResult> results;
    results.reserve(models.size());
    for (const auto& model : models)
        results.push_back(solve_case(bundle, *props, *model));

    size_t channel;
    if (opt.channel >= 0) {
        channel = static_cast<size_t>(opt.channel);
        if (channel >= bundle.channels.size())
            throw InputError("report: --channel " +
                             std::to_string(opt.channel) + " out of range (" +
                             std::to_string(bundle.channels.size()) +
                             " channels)");
    } else {
        channel = results[0].limiting_channel;
    }

    std::ofstream out = open_out(out_dir / "dnbr_profile.csv");
    out << "z_m,qpp_kWm2";
    for (const auto& m : models)
        out << ",dnbr_" << m->name() << ",chf_" << m->name() << "_kWm2";
    out << "\n";
    const auto& nodes = results[0].profile[channel].nodes;
    for (size_t k = 0; k < nodes.size(); ++k) {
        out << fmt(nodes[k].z_m) << "," << fmt(nodes[k].qpp_kwm2);
        for (const CaseResult& r : results)
            out << "," << fmt(r.profile[channel].dnbr[k]) << ","
                << fmt(r.profile[channel].chf_kwm2[k]);
        out << "\n";
    }
    std::cout << "wrote DNBR curves for channel " << channel << " ("
              << models.size() << " model(s), " << nodes.size()
              << " nodes)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical heat flux model toolkit"};
    app.require_subcommand(1);

    TrainOptions topt;
    CLI::App* t = app.add_subcommand(
        "train", "Fit a pure or residual-correcting network from a CHF CSV");
    t->add_option("data", topt.data, "training CSV")->required();
    t->add_option("--model", topt.model_id,
                  "pure-ml | hybrid-bowring | hybrid-lut");
    t->add_option("--props", topt.props, "saturation property CSV");
    t->add_option("--lut", topt.lut, "lookup table CSV");
    t->add_option("--out-dir", topt.out_dir, "output directory");
    t->add_option("--seed", topt.seed, "RNG seed");
    t->add_option("--epochs", topt.epochs, "max epochs");
    t->add_option("--batch", topt.batch, "mini-batch size");
    t->add_option("--lr", topt.lr, "initial learning rate");
    t->add_option("--decay", topt.decay, "per-epoch lr decay");
    t->add_option("--patience", topt.patience, "early-stop patience");
    t->add_option("--min-delta", topt.min_delta, "early-stop threshold");
    t->add_option("--l2", topt.l2, "L2 penalty strength");
    t->add_option("--hidden", topt.hidden, "hidden widths, e.g. 16,16");
    t->add_option("--activation", topt.activation, "relu | tanh");
    t->add_option("--f-val", topt.f_val, "validation fraction");
    t->add_option("--f-test", topt.f_test, "test fraction");
    t->add_option("--search", topt.search,
                  "random-search trials (0 = use flags as-is)");

    EvalOptions eopt;
    CLI::App* e = app.add_subcommand(
        "eval-tubes", "Score models on a holdout CSV via tube heat balance");
    e->add_option("data", eopt.data, "holdout CSV")->required();
    e->add_option("--models", eopt.models,
                  "comma list of builtin ids or manifest paths")
        ->required();
    e->add_option("--props", eopt.props, "saturation property CSV");
    e->add_option("--lut", eopt.lut, "lookup table CSV");
    e->add_option("--weights", eopt.weights, "weight file for builtin ML ids");
    e->add_option("--out-dir", eopt.out_dir, "output directory");
    e->add_option("--nodes", eopt.nodes, "axial nodes per tube");
    e->add_option("--length", eopt.default_length,
                  "heated length when the CSV has no Lh_m column [m]");

    BundleOptions bopt;
    CLI::App* b = app.add_subcommand(
        "run-bundle", "Solve a bundle case and write DNBR profiles");
    b->add_option("case", bopt.case_file, "case file")->required();
    b->add_option("--models", bopt.models, "comma list of models")->required();
    b->add_option("--props", bopt.props, "saturation property CSV");
    b->add_option("--lut", bopt.lut, "lookup table CSV");
    b->add_option("--weights", bopt.weights, "weight file for builtin ML ids");
    b->add_option("--out-dir", bopt.out_dir, "output directory");

    BundleOptions sopt;
    CLI::App* s = app.add_subcommand(
        "beta-sweep", "Solve one case across mixing coefficients");
    s->add_option("case", sopt.case_file, "case file")->required();
    s->add_option("--model", sopt.models, "model id or manifest")->required();
    s->add_option("--betas", sopt.betas, "comma list of mixing coefficients");
    s->add_option("--props", sopt.props, "saturation property CSV");
    s->add_option("--lut", sopt.lut, "lookup table CSV");
    s->add_option("--weights", sopt.weights, "weight file for builtin ML ids");
    s->add_option("--out-dir", sopt.out_dir, "output directory");

    BundleOptions ropt;
    CLI::App* r = app.add_subcommand(
        "report", "Write plot-ready axial DNBR curves for one channel");
    r->add_option("case", ropt.case_file, "case file")->required();
    r->add_option("--models", ropt.models, "comma list of models")->required();
    r->add_option("--channel", ropt.channel,
                  "channel index (default: limiting channel)");
    r->add_option("--props", ropt.props, "saturation property CSV");
    r->add_option("--lut", ropt.lut, "lookup table CSV");
    r->add_option("--weights", ropt.weights, "weight file for builtin ML ids");
    r->add_option("--out-dir", ropt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "error: input: " << ex.what() << "\n";
        return 2;
    }

    try {
        if (t->parsed()) return cmd_train(topt);
        if (e->parsed()) return cmd_eval_tubes(eopt);
        if (b->parsed()) return cmd_run_bundle(bopt);
        if (s->parsed()) return cmd_beta_sweep(sopt);
        if (r->parsed()) return cmd_report(ropt);
        std::cerr << "error: input: no subcommand\n";
        return 2;
    } catch (const InputError& ex) {
        std::cerr << "error: input: " << ex.what() << "\n";
        return 2;
    } catch (const RangeError& ex) {
        std::cerr << "error: input: " << ex.what() << "\n";
        return 2;
    } catch (const SolverError& ex) {
        std::cerr << "error: solver: " << ex.what() << "\n";
        return 3;
    } catch (const ModelError& ex) {
        std::cerr << "error: model: " << ex.what() << "\n";
        return 4;
    } catch (const Error& ex) {
        std::cerr << "error: input: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: internal: " << ex.what() << "\n";
        return 1;
    }
}

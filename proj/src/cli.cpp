// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/cli.hpp"

#include "mariner/common.hpp"
#include "mariner/geometry.hpp"
#include "mariner/io.hpp"
#include "mariner/parallel.hpp"
#include "mariner/pathloss.hpp"
#include "mariner/plfit.hpp"
#include "mariner/seastate.hpp"
#include "mariner/smallscale.hpp"
#include "mariner/sounder.hpp"
#include "mariner/sparsity.hpp"
#include "mariner/swift.hpp"
#include "mariner/temporal.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <random>

#ifndef MARINER_VERSION
#define MARINER_VERSION "0.0.0"
#endif

namespace mariner::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kDeg = kPi / 180.0;
const std::vector<std::string> kAllFamilies = {"rician", "twdp", "nakagami", "lognormal", "laplace", "asym-laplace"};

json default_config()
{
    return {
        {"seed", 1},
        {"output_dir", "."},
        {"inputs", json::object()},
        {"geometry", {{"f_c", 5.8e9}, {"h_t", 25.0}, {"h_r", 4.0}, {"d", 1000.0}, {"r_e", 6371000.0}, {"k_eff", 1.0}}},
        {"sea",
         {{"v_w", 7.7},
          {"gamma_re", -1.0},
          {"gamma_im", 0.0},
          {"divergence", "inverse-sqrt"},
          {"phase", "corrected"},
          {"n_harmonics", 5},
          {"omega_lo", 0.0},
          {"omega_hi", 0.0}}},
        {"motion",
         {{"from_seed", true},
          {"roll_amp_deg", 5.0},
          {"pitch_amp_deg", 5.0},
          {"yaw_amp_deg", 2.0},
          {"roll_rate", 0.0},
          {"pitch_rate", 0.0},
          {"yaw_rate", 0.0},
          {"roll_phase", 0.0},
          {"pitch_phase", 0.0},
          {"yaw_phase", 0.0}}},
        {"pattern",
         {{"type", "cosine"}, {"boresight_deg", 0.0}, {"elevations_deg", json::array()}, {"gains", json::array()}}},
        {"pathloss",
         {{"model", "dual-ci-mtr"},
          {"n", 2.0},
          {"d0", 1.0},
          {"n1", 2.02},
          {"n2", 3.27},
          {"d_break", 0.0},
          {"sigma_sf", 0.0},
          {"dmin", 2000.0},
          {"dmax", 33800.0},
          {"step", 20.0}}},
        {"swift", {{"duration", 93.0}, {"dt", 0.1}, {"bin_width_db", 0.25}}},
        {"smallscale",
         {{"family", "rician"},
          {"params", json::object()},
          {"n", 10000},
          {"normalize", true},
          {"min_samples", 30},
          {"bins", 50}}},
        {"sparsity",
         {{"threshold_db", nullptr}, {"noise_floor", nullptr}, {"trials", 10000}, {"max_taps", 50}, {"max_split", 8}}},
        {"sounder",
         {{"length", 65535},
          {"root", 1},
          {"snr_db", 30.0},
          {"periods", 1},
          {"delta_tau_ns", 50.0},
          {"gamma_ns", 24.0},
          {"n_taps", 5},
          {"threshold_db", 20.0}}},
        {"decompose", {{"group_size", 100}, {"sample_rate_hz", 1000.0}}},
    };
}

// Rejects keys the defaults do not know, so typos surface as validation
// errors instead of being ignored. Free-form objects are skipped.
void check_known_keys(const json& user, const json& defaults, const std::string& where)
{
    if (!user.is_object())
        throw DomainError("config" + where + " must be a JSON object");
    for (const auto& [key, value] : user.items()) {
        if (!defaults.contains(key))
            throw DomainError("unknown config key '" + where + "/" + key + "'");
        const json& def = defaults.at(key);
        if (key == "params" || key == "inputs")
            continue;
        if (def.is_object())
            check_known_keys(value, def, where + "/" + key);
    }
}

json config_without_output(json cfg)
{
    cfg.erase("output_dir");
    return cfg;
}

std::string config_hash(const json& cfg) { return io::sha256_hex(config_without_output(cfg).dump()); }

// ----- config -> module structs ---------------------------------------------

double num(const json& cfg, const char* block, const char* key) { return cfg.at(block).at(key).get<double>(); }

std::uint64_t seed_of(const json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

LinkGeometry geometry_from(const json& cfg)
{
    LinkGeometry g;
    g.f_c = num(cfg, "geometry", "f_c");
    g.h_t = num(cfg, "geometry", "h_t");
    g.h_r = num(cfg, "geometry", "h_r");
    g.d = num(cfg, "geometry", "d");
    g.r_e = num(cfg, "geometry", "r_e");
    g.k_eff = num(cfg, "geometry", "k_eff");
    g.validate();
    return g;
}

SeaStateParams sea_from(const json& cfg)
{
    SeaStateParams s;
    s.v_w = num(cfg, "sea", "v_w");
    s.gamma_refl = {num(cfg, "sea", "gamma_re"), num(cfg, "sea", "gamma_im")};
    const auto div = cfg.at("sea").at("divergence").get<std::string>();
    if (div == "inverse-sqrt")
        s.divergence = DivergenceForm::InverseSqrt;
    else if (div == "as-printed")
        s.divergence = DivergenceForm::AsPrinted;
    else
        throw DomainError("sea.divergence must be 'inverse-sqrt' or 'as-printed'");
    const auto phase = cfg.at("sea").at("phase").get<std::string>();
    if (phase == "corrected")
        s.phase = PhaseForm::Corrected;
    else if (phase == "as-printed")
        s.phase = PhaseForm::AsPrinted;
    else
        throw DomainError("sea.phase must be 'corrected' or 'as-printed'");
    s.validate();
    return s;
}

WaveSpectrumConfig waves_from(const json& cfg)
{
    WaveSpectrumConfig w;
    w.v_w = num(cfg, "sea", "v_w");
    w.n_harmonics = cfg.at("sea").at("n_harmonics").get<int>();
    w.omega_lo = num(cfg, "sea", "omega_lo");
    w.omega_hi = num(cfg, "sea", "omega_hi");
    w.seed = seed_of(cfg);
    w.validate();
    return w;
}

AntennaPattern pattern_from(const json& cfg)
{
    const json& p = cfg.at("pattern");
    const double boresight = p.at("boresight_deg").get<double>() * kDeg;
    const auto type = p.at("type").get<std::string>();
    if (type == "cosine")
        return AntennaPattern::cosine(boresight);
    if (type == "table") {
        std::vector<double> elev = p.at("elevations_deg").get<std::vector<double>>();
        for (double& e : elev)
            e *= kDeg;
        return AntennaPattern::table(std::move(elev), p.at("gains").get<std::vector<double>>(), boresight);
    }
    throw DomainError("pattern.type must be 'cosine' or 'table'");
}

SwiftConfig swift_from(const json& cfg)
{
    SwiftConfig s;
    s.geometry = geometry_from(cfg);
    s.sea = sea_from(cfg);
    s.waves = waves_from(cfg);
    s.seed = seed_of(cfg);
    s.duration = num(cfg, "swift", "duration");
    s.dt = num(cfg, "swift", "dt");
    require(s.duration > 0.0 && s.dt > 0.0, "swift.duration and swift.dt must be positive");
    s.pattern = pattern_from(cfg);
    const json& m = cfg.at("motion");
    s.motion_from_seed = false;
    if (m.at("from_seed").get<bool>()) {
        s.motion = MotionConfig::from_seed(pm_peak_frequency(s.sea.v_w), s.seed, m.at("roll_amp_deg").get<double>(),
                                           m.at("pitch_amp_deg").get<double>(), m.at("yaw_amp_deg").get<double>());
    } else {
        s.motion.roll_amp = m.at("roll_amp_deg").get<double>() * kDeg;
        s.motion.pitch_amp = m.at("pitch_amp_deg").get<double>() * kDeg;
        s.motion.yaw_amp = m.at("yaw_amp_deg").get<double>() * kDeg;
        s.motion.roll_rate = m.at("roll_rate").get<double>();
        s.motion.pitch_rate = m.at("pitch_rate").get<double>();
        s.motion.yaw_rate = m.at("yaw_rate").get<double>();
        s.motion.roll_phase = m.at("roll_phase").get<double>();
        s.motion.pitch_phase = m.at("pitch_phase").get<double>();
        s.motion.yaw_phase = m.at("yaw_phase").get<double>();
    }
    s.motion.validate();
    return s;
}

FadingModel model_from(const json& cfg)
{
    json j = cfg.at("smallscale").at("params");
    require(j.is_object(), "smallscale.params must be an object");
    j["family"] = cfg.at("smallscale").at("family");
    return io::fading_model_from_json(j);
}

fs::path input_path(const json& cfg, const char* key, const char* flag)
{
    const json& in = cfg.at("inputs");
    if (!in.contains(key) || !in.at(key).is_string())
        throw DomainError(std::string("missing input file (") + flag + ")");
    return in.at(key).get<std::string>();
}

// ----- execution ------------------------------------------------------------

struct Run {
    json cfg;
    fs::path dir;
    std::vector<std::string> outputs;

    fs::path file(const std::string& name)
    {
        outputs.push_back(name);
        return dir / name;
    }
};

json cmd_geometry(Run& run)
{
    const LinkGeometry g = geometry_from(run.cfg);
    json j = io::to_json(thresholds(g));
    j["wavelength_m"] = wavelength(g);
    return j;
}

std::vector<double> distance_grid(const json& cfg)
{
    const double lo = num(cfg, "pathloss", "dmin");
    const double hi = num(cfg, "pathloss", "dmax");
    const double step = num(cfg, "pathloss", "step");
    require(lo > 0.0 && hi >= lo && step > 0.0, "need 0 < dmin <= dmax and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    require(count <= 50'000'000, "distance grid is too large");
    std::vector<double> d(count);
    for (std::size_t i = 0; i < count; ++i)
        d[i] = lo + static_cast<double>(i) * step;
    return d;
}

ModelInputs model_inputs_from(const json& cfg)
{
    ModelInputs in;
    in.geometry = geometry_from(cfg);
    in.sea = sea_from(cfg);
    in.ci = {num(cfg, "pathloss", "n"), num(cfg, "pathloss", "d0"), num(cfg, "pathloss", "sigma_sf")};
    const double d_break = num(cfg, "pathloss", "d_break");
    in.dual = {num(cfg, "pathloss", "n1"), num(cfg, "pathloss", "n2"),
               d_break > 0.0 ? d_break : break_distance(in.geometry), num(cfg, "pathloss", "sigma_sf"),
               num(cfg, "pathloss", "d0")};
    return in;
}

json cmd_pathloss_eval(Run& run)
{
    const auto name = run.cfg.at("pathloss").at("model").get<std::string>();
    const PathLossModel model = parse_path_loss_model(name);
    const ModelInputs in = model_inputs_from(run.cfg);
    const std::vector<double> d = distance_grid(run.cfg);
    const std::vector<LossDb> loss = sweep(model, in, d);
    std::vector<double> pl(loss.size());
    std::size_t nulls = 0;
    for (std::size_t i = 0; i < loss.size(); ++i) {
        pl[i] = loss[i].db;
        nulls += loss[i].null;
    }
    const double sigma = num(run.cfg, "pathloss", "sigma_sf");
    require(sigma >= 0.0, "pathloss.sigma_sf must be non-negative");
    if (sigma > 0.0)
        pl = sample_shadowing(pl, sigma, seed_of(run.cfg));
    io::write_pathloss_csv(run.file("pathloss.csv"), d, pl);
    return {{"model", name}, {"n_points", d.size()}, {"n_nulls", nulls}, {"sigma_sf_db", sigma},
            {"d_break_m", in.dual.d_break}};
}

json cmd_pathloss_fit(Run& run)
{
    const std::vector<PathLossSample> samples = io::read_pathloss_csv(input_path(run.cfg, "data", "--data"));
    const ModelInputs in = model_inputs_from(run.cfg);
    const auto name = run.cfg.at("pathloss").at("model").get<std::string>();
    switch (parse_path_loss_model(name)) {
    case PathLossModel::Ci: return io::to_json(fit_ci(samples, in.geometry.f_c, in.ci.d0));
    case PathLossModel::DualCi:
        return io::to_json(fit_dual_ci(samples, in.geometry.f_c, in.dual.d_break, in.dual.d0));
    case PathLossModel::DualCiMtr: return io::to_json(fit_dual_ci_mtr(samples, in.geometry, in.sea));
    default: throw DomainError("pathloss fit supports ci, dual-ci and dual-ci-mtr");
    }
}

json cmd_swift_sim(Run& run)
{
    const SwiftConfig sc = swift_from(run.cfg);
    const SwiftSeries s = simulate_swift(sc);
    io::write_swift_csv(run.file("swift.csv"), s.t, s.fading_db);
    json j = io::to_json(build_harmonics([&] {
        WaveSpectrumConfig w = sc.waves;
        w.v_w = sc.sea.v_w;
        w.seed = sc.seed;
        return w;
    }()));
    j["n_samples"] = s.t.size();
    j["flagged"] = s.flagged;
    j["std_db"] = s.fading_db.empty() ? 0.0 : series_std(s.fading_db);
    j["seed"] = s.seed;
    return j;
}

json cmd_swift_pdf(Run& run)
{
    std::vector<double> fading;
    if (run.cfg.at("inputs").contains("data")) {
        fading = io::read_swift_csv(input_path(run.cfg, "data", "--data")).second;
    } else {
        fading = simulate_swift(swift_from(run.cfg)).fading_db;
    }
    require(!fading.empty(), "no SWIFT samples to histogram");
    const double bw = num(run.cfg, "swift", "bin_width_db");
    const Histogram h = empirical_pdf(fading, bw);
    io::write_histogram_csv(run.file("swift_pdf.csv"), h);
    return {{"n_samples", fading.size()}, {"bin_width_db", bw}, {"n_bins", h.centers.size()},
            {"std_db", series_std(fading)}};
}

std::vector<double> envelope_input(const json& cfg)
{
    std::vector<double> data = io::read_envelope_csv(input_path(cfg, "data", "--data"));
    if (cfg.at("smallscale").at("normalize").get<bool>())
        data = EnvelopeSamples::normalized(std::move(data)).values;
    return data;
}

FitOptions fit_options_from(const json& cfg)
{
    FitOptions opt;
    opt.min_samples = cfg.at("smallscale").at("min_samples").get<std::size_t>();
    opt.histogram_bins = cfg.at("smallscale").at("bins").get<int>();
    opt.seed = seed_of(cfg);
    return opt;
}

json cmd_smallscale_fit(Run& run)
{
    const std::vector<double> data = envelope_input(run.cfg);
    const FitOptions opt = fit_options_from(run.cfg);
    const auto family = run.cfg.at("smallscale").at("family").get<std::string>();
    const std::vector<std::string> families = family == "all" ? kAllFamilies : std::vector<std::string>{family};
    json fits = json::array();
    std::string best;
    double best_ks = kInf;
    for (const std::string& f : families) {
        const FitReport rep = fit_mle(parse_family(f), data, opt);
        if (rep.ks < best_ks) {
            best_ks = rep.ks;
            best = f;
        }
        fits.push_back(io::to_json(rep));
    }
    return {{"n", data.size()},
            {"normalized", run.cfg.at("smallscale").at("normalize").get<bool>()},
            {"fits", fits},
            {"best_family", best}};
}

json cmd_smallscale_sample(Run& run)
{
    const FadingModel m = model_from(run.cfg);
    const auto n = run.cfg.at("smallscale").at("n").get<std::size_t>();
    require(n >= 1, "smallscale.n must be >= 1");
    const std::vector<double> x = sample(m, n, seed_of(run.cfg));
    io::write_envelope_csv(run.file("envelope.csv"), x);
    return {{"model", io::to_json(m)}, {"n", n}};
}

json cmd_smallscale_gof(Run& run)
{
    const std::vector<double> data = envelope_input(run.cfg);
    const FadingModel m = model_from(run.cfg);
    const int bins = run.cfg.at("smallscale").at("bins").get<int>();
    return {{"model", io::to_json(m)},
            {"n", data.size()},
            {"ks", ks_statistic(data, m)},
            {"pdf_rmse", pdf_rmse(data, m, bins)},
            {"loglik", log_likelihood(m, data)}};
}

// Optional MPC extraction shared by the PDP commands.
PdpRecord pdp_input(Run& run, json& summary)
{
    PdpRecord p = io::read_pdp_csv(input_path(run.cfg, "pdp", "--pdp"));
    const json& sp = run.cfg.at("sparsity");
    // extraction runs when either knob is set; the threshold defaults to 6 dB
    if (!sp.at("threshold_db").is_null() || !sp.at("noise_floor").is_null()) {
        const double floor =
            sp.at("noise_floor").is_null() ? estimate_noise_floor(p.powers) : sp.at("noise_floor").get<double>();
        const double thr = sp.at("threshold_db").is_null() ? kDefaultMpcThresholdDb : sp.at("threshold_db").get<double>();
        p = mpc_extract(p, floor, thr);
        summary["threshold_db"] = thr;
        summary["noise_floor"] = floor;
        io::write_pdp_csv(run.file("mpc.csv"), p);
    }
    return p;
}

json cmd_sparsity(Run& run)
{
    json j;
    const PdpRecord p = pdp_input(run, j);
    j.update(io::to_json(sparsity_metrics(p)));
    return j;
}

json cmd_lemma_check(Run& run)
{
    LemmaCheckConfig c;
    c.trials = run.cfg.at("sparsity").at("trials").get<std::size_t>();
    c.max_taps = run.cfg.at("sparsity").at("max_taps").get<int>();
    c.max_split = run.cfg.at("sparsity").at("max_split").get<int>();
    c.seed = seed_of(run.cfg);
    return io::to_json(lemma_check(c));
}

json cmd_temporal(Run& run)
{
    json j;
    const PdpRecord p = pdp_input(run, j);
    j["delay"] = io::to_json(delay_stats(p));
    if (std::count_if(p.powers.begin(), p.powers.end(), [](double v) { return v > 0.0; }) >= 2)
        j["exp_fit"] = io::to_json(fit_exp_pdp(p));
    else
        j["exp_fit"] = nullptr;
    return j;
}

ZcConfig zc_from(const json& cfg)
{
    ZcConfig z;
    z.length = cfg.at("sounder").at("length").get<std::size_t>();
    z.root = cfg.at("sounder").at("root").get<long long>();
    z.validate();
    return z;
}

double delta_tau_from(const json& cfg)
{
    const double dt = num(cfg, "sounder", "delta_tau_ns") * 1e-9;
    require(dt > 0.0, "sounder.delta_tau_ns must be positive");
    return dt;
}

json cmd_sounder_sim(Run& run)
{
    const ZcConfig zc = zc_from(run.cfg);
    ExpPdpSpec spec;
    spec.gamma = num(run.cfg, "sounder", "gamma_ns") * 1e-9;
    spec.delta_tau = delta_tau_from(run.cfg);
    spec.n_taps = run.cfg.at("sounder").at("n_taps").get<int>();
    const PdpRecord truth = synth_exp_pdp(spec);

    // random tap phases drawn from a stream separate from the noise
    std::mt19937_64 rng(seed_of(run.cfg) ^ 0xa0761d6478bd642fULL);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    Cir cir;
    cir.delta_tau = spec.delta_tau;
    for (double p : truth.powers)
        cir.taps.push_back(std::polar(std::sqrt(p), phase(rng)));

    LinkConfig link;
    link.snr_db = num(run.cfg, "sounder", "snr_db");
    link.periods = run.cfg.at("sounder").at("periods").get<std::size_t>();
    link.seed = seed_of(run.cfg);
    const std::vector<cplx> rx = simulate_link(cir, zc, link);
    io::write_iq(run.file("rx.iq"), rx);
    io::write_pdp_csv(run.file("true_pdp.csv"), truth);
    return {{"length", zc.length}, {"root", zc.root},           {"snr_db", link.snr_db},
            {"periods", link.periods}, {"n_samples", rx.size()}, {"n_taps", truth.size()}};
}

json cmd_sounder_extract(Run& run)
{
    const ZcConfig zc = zc_from(run.cfg);
    const std::vector<cplx> rx = io::read_iq(input_path(run.cfg, "iq", "--iq"));
    const PdpRecord dense = pdp_from_cir(extract_cir(rx, zc, delta_tau_from(run.cfg)));
    const double floor = estimate_noise_floor(dense.powers);
    const double thr = num(run.cfg, "sounder", "threshold_db");
    const PdpRecord mpcs = mpc_extract(dense, floor, thr);
    io::write_pdp_csv(run.file("pdp.csv"), mpcs);
    json j{{"noise_floor", floor}, {"threshold_db", thr}};
    j["sparsity"] = io::to_json(sparsity_metrics(mpcs));
    j["delay"] = io::to_json(delay_stats(mpcs));
    j["exp_fit"] = mpcs.size() >= 2 ? io::to_json(fit_exp_pdp(mpcs)) : json(nullptr);
    return j;
}

json cmd_decompose(Run& run)
{
    const std::vector<double> data = io::read_envelope_csv(input_path(run.cfg, "data", "--data"));
    const auto group = run.cfg.at("decompose").at("group_size").get<std::size_t>();
    const double rate = num(run.cfg, "decompose", "sample_rate_hz");
    require(group >= 1, "decompose.group_size must be >= 1");
    require(rate > 0.0, "decompose.sample_rate_hz must be positive");
    const std::size_t n_groups = data.size() / group;
    require(n_groups >= 1, "fewer samples than one group");
    std::vector<std::vector<double>> groups(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g)
        groups[g].assign(data.begin() + static_cast<std::ptrdiff_t>(g * group),
                         data.begin() + static_cast<std::ptrdiff_t>((g + 1) * group));
    const ScaleDecomposition dec = decompose_scales(groups);
    std::vector<double> t(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g)
        t[g] = (static_cast<double>(g) + 0.5) * static_cast<double>(group) / rate;
    io::write_swift_csv(run.file("swift.csv"), t, dec.swift_db);
    io::write_envelope_csv(run.file("envelope.csv"), dec.small_scale);
    return {{"n_groups", n_groups},
            {"dropped_samples", data.size() - n_groups * group},
            {"swift_std_db", series_std(dec.swift_db)}};
}

using Command = std::function<json(Run&)>;

const std::map<std::string, std::pair<Command, std::string>>& commands()
{
    static const std::map<std::string, std::pair<Command, std::string>> table = {
        {"geometry", {cmd_geometry, "geometry.json"}},
        {"pathloss eval", {cmd_pathloss_eval, "pathloss_eval.json"}},
        {"pathloss fit", {cmd_pathloss_fit, "pathloss_fit.json"}},
        {"swift sim", {cmd_swift_sim, "swift_sim.json"}},
        {"swift pdf", {cmd_swift_pdf, "swift_pdf.json"}},
        {"smallscale fit", {cmd_smallscale_fit, "smallscale_fit.json"}},
        {"smallscale sample", {cmd_smallscale_sample, "smallscale_sample.json"}},
        {"smallscale gof", {cmd_smallscale_gof, "smallscale_gof.json"}},
        {"sparsity", {cmd_sparsity, "sparsity.json"}},
        {"sparsity lemma-check", {cmd_lemma_check, "lemma_check.json"}},
        {"temporal", {cmd_temporal, "temporal.json"}},
        {"sounder sim", {cmd_sounder_sim, "sounder_sim.json"}},
        {"sounder extract", {cmd_sounder_extract, "sounder_extract.json"}},
        {"decompose", {cmd_decompose, "decompose.json"}},
    };
    return table;
}

int execute(const std::string& command, const json& cfg, std::ostream& out)
{
    const auto it = commands().find(command);
    if (it == commands().end())
        throw DomainError("unknown command '" + command + "'");
    Run run{cfg, fs::path(cfg.at("output_dir").get<std::string>()), {}};
    fs::create_directories(run.dir);
    const json result = it->second.first(run);
    const std::string text = result.dump(2) + "\n";
    io::write_text(run.file(it->second.second), text);

    json manifest;
    manifest["tool"] = "mariner-chan";
    manifest["version"] = version();
    manifest["command"] = command;
    manifest["seed"] = cfg.at("seed");
    manifest["config_hash"] = config_hash(cfg);
    manifest["config"] = cfg;
    json outputs = json::array();
    for (const std::string& name : run.outputs)
        outputs.push_back({{"file", name}, {"sha256", io::sha256_file(run.dir / name)}});
    manifest["outputs"] = outputs;
    io::write_text(run.dir / "manifest.json", manifest.dump(2) + "\n");
    out << text;
    return kExitOk;
}

int replay(const fs::path& manifest_path, const std::string& out_override, std::ostream& out)
{
    json manifest;
    try {
        manifest = json::parse(io::read_text(manifest_path));
    } catch (const json::parse_error& e) {
        throw DomainError(manifest_path.string() + ": " + e.what());
    }
    require(manifest.contains("command") && manifest.contains("config") && manifest.contains("config_hash"),
            "manifest lacks command, config or config_hash");
    json cfg = manifest.at("config");
    if (config_hash(cfg) != manifest.at("config_hash").get<std::string>())
        throw DomainError("manifest config does not match its recorded hash");
    if (!out_override.empty())
        cfg["output_dir"] = fs::absolute(out_override).string();
    return execute(manifest.at("command").get<std::string>(), cfg, out);
}

// ----- argument parsing -----------------------------------------------------

struct Binding {
    CLI::Option* option;
    std::function<void(json&)> apply;
};

class Flags {
public:
    Flags(CLI::App* app, std::vector<Binding>& bindings) : app_(app), bindings_(bindings) {}

    template <class T>
    Flags& value(const std::string& name, const std::string& pointer, const std::string& help)
    {
        auto holder = std::make_shared<T>();
        CLI::Option* opt = app_->add_option(name, *holder, help);
        bindings_.push_back({opt, [holder, pointer](json& c) { c[json::json_pointer(pointer)] = *holder; }});
        return *this;
    }

    Flags& path(const std::string& name, const std::string& pointer, const std::string& help)
    {
        auto holder = std::make_shared<std::string>();
        CLI::Option* opt = app_->add_option(name, *holder, help);
        bindings_.push_back(
            {opt, [holder, pointer](json& c) { c[json::json_pointer(pointer)] = fs::absolute(*holder).string(); }});
        return *this;
    }

    Flags& set(const std::string& name, const std::string& pointer, json v, const std::string& help)
    {
        CLI::Option* opt = app_->add_flag(name, help);
        bindings_.push_back({opt, [v, pointer](json& c) { c[json::json_pointer(pointer)] = v; }});
        return *this;
    }

    Flags& params(const std::string& name, const std::string& help)
    {
        auto holder = std::make_shared<std::vector<std::string>>();
        CLI::Option* opt = app_->add_option(name, *holder, help);
        bindings_.push_back({opt, [holder](json& c) {
                                 for (const std::string& kv : *holder) {
                                     const auto eq = kv.find('=');
                                     if (eq == std::string::npos || eq == 0)
                                         throw DomainError("--param expects name=value, got '" + kv + "'");
                                     c["smallscale"]["params"][kv.substr(0, eq)] =
                                         io::parse_double(kv.substr(eq + 1));
                                 }
                             }});
        return *this;
    }

    Flags& link()
    {
        value<double>("--fc", "/geometry/f_c", "carrier frequency [Hz]");
        value<double>("--ht", "/geometry/h_t", "Tx antenna height [m]");
        value<double>("--hr", "/geometry/h_r", "Rx antenna height [m]");
        value<double>("--distance", "/geometry/d", "Tx-Rx distance [m]");
        value<double>("--k-eff", "/geometry/k_eff", "effective Earth radius factor");
        value<double>("--wind", "/sea/v_w", "wind speed [m/s]");
        return *this;
    }

private:
    CLI::App* app_;
    std::vector<Binding>& bindings_;
};

struct Leaf {
    std::string name;
    CLI::App* app;
};

} // namespace

std::string version() { return MARINER_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    apply_thread_limit();

    CLI::App app{"mariner-chan: maritime radio channel modeling toolkit", "mariner-chan"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    std::vector<Binding> bindings;
    std::vector<Leaf> leaves;
    std::string config_path;
    std::string manifest_path;
    std::string replay_out;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& full) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        Flags f(sub, bindings);
        f.path("--out", "/output_dir", "output directory");
        f.value<std::uint64_t>("--seed", "/seed", "random seed");
        leaves.push_back({full, sub});
        return f;
    };

    leaf(&app, "geometry", "threshold distances of a link", "geometry").link();

    CLI::App* pathloss = app.add_subcommand("pathloss", "large-scale path loss");
    pathloss->require_subcommand(1);
    leaf(pathloss, "eval", "evaluate a path loss model over a distance grid", "pathloss eval")
        .link()
        .value<std::string>("--model", "/pathloss/model", "fspl|two-ray|mtr|ci|dual-ci|dual-ci-mtr")
        .value<double>("--dmin", "/pathloss/dmin", "first distance [m]")
        .value<double>("--dmax", "/pathloss/dmax", "last distance [m]")
        .value<double>("--step", "/pathloss/step", "distance step [m]")
        .value<double>("--n", "/pathloss/n", "CI path loss exponent")
        .value<double>("--n1", "/pathloss/n1", "exponent before the break")
        .value<double>("--n2", "/pathloss/n2", "exponent after the break")
        .value<double>("--d-break", "/pathloss/d_break", "break distance [m]; 0 uses 4 h_t h_r / lambda")
        .value<double>("--shadowing", "/pathloss/sigma_sf", "add Gaussian shadow fading with this std [dB]");
    leaf(pathloss, "fit", "fit path loss exponents to measurements", "pathloss fit")
        .link()
        .path("--data", "/inputs/data", "CSV with columns d_m,pl_db")
        .value<std::string>("--model", "/pathloss/model", "ci|dual-ci|dual-ci-mtr")
        .value<double>("--d-break", "/pathloss/d_break", "break distance for dual-ci [m]")
        .value<double>("--d0", "/pathloss/d0", "reference distance [m]");

    CLI::App* swift = app.add_subcommand("swift", "sea-wave-induced fixed-point fading");
    swift->require_subcommand(1);
    leaf(swift, "sim", "simulate a fading time series", "swift sim")
        .link()
        .value<double>("--duration", "/swift/duration", "series length [s]")
        .value<double>("--dt", "/swift/dt", "time step [s]")
        .value<int>("--harmonics", "/sea/n_harmonics", "number of wave harmonics");
    leaf(swift, "pdf", "histogram of a fading series", "swift pdf")
        .link()
        .path("--data", "/inputs/data", "CSV with columns t_s,fading_db (simulated when absent)")
        .value<double>("--bin-width", "/swift/bin_width_db", "bin width [dB]")
        .value<double>("--duration", "/swift/duration", "series length [s]")
        .value<double>("--dt", "/swift/dt", "time step [s]");

    CLI::App* small = app.add_subcommand("smallscale", "small-scale fading distributions");
    small->require_subcommand(1);
    leaf(small, "fit", "maximum-likelihood fits of envelope samples", "smallscale fit")
        .path("--data", "/inputs/data", "CSV with column amplitude")
        .value<std::string>("--family", "/smallscale/family", "family name or 'all'")
        .value<int>("--bins", "/smallscale/bins", "histogram bins for the pdf RMSE")
        .value<std::size_t>("--min-samples", "/smallscale/min_samples", "minimum sample count")
        .set("--no-normalize", "/smallscale/normalize", false, "fit the raw amplitudes");
    leaf(small, "sample", "draw samples from a distribution", "smallscale sample")
        .value<std::string>("--family", "/smallscale/family", "family name")
        .params("--param", "distribution parameter name=value (repeatable)")
        .value<std::size_t>("--n", "/smallscale/n", "number of samples");
    leaf(small, "gof", "goodness of fit of a given distribution", "smallscale gof")
        .path("--data", "/inputs/data", "CSV with column amplitude")
        .value<std::string>("--family", "/smallscale/family", "family name")
        .params("--param", "distribution parameter name=value (repeatable)")
        .value<int>("--bins", "/smallscale/bins", "histogram bins for the pdf RMSE")
        .set("--no-normalize", "/smallscale/normalize", false, "use the raw amplitudes");

    CLI::App* sparsity = app.add_subcommand("sparsity", "Gini index and K factor of a PDP");
    sparsity->require_subcommand(0, 1);
    {
        sparsity->add_option("--config", config_path, "JSON config file");
        Flags f(sparsity, bindings);
        f.path("--out", "/output_dir", "output directory")
            .value<std::uint64_t>("--seed", "/seed", "random seed")
            .path("--pdp", "/inputs/pdp", "CSV with columns delay_ns,power_linear")
            .value<double>("--threshold-db", "/sparsity/threshold_db", "extract MPCs above floor + threshold")
            .value<double>("--noise-floor", "/sparsity/noise_floor", "linear noise floor (estimated when absent)");
        leaves.push_back({"sparsity", sparsity});
    }
    leaf(sparsity, "lemma-check", "randomized Gini splitting checks", "sparsity lemma-check")
        .value<std::size_t>("--trials", "/sparsity/trials", "number of random PDPs")
        .value<int>("--max-taps", "/sparsity/max_taps", "largest PDP size")
        .value<int>("--max-split", "/sparsity/max_split", "largest split factor");

    leaf(&app, "temporal", "delay spread and exponential PDP fit", "temporal")
        .path("--pdp", "/inputs/pdp", "CSV with columns delay_ns,power_linear")
        .value<double>("--threshold-db", "/sparsity/threshold_db", "extract MPCs above floor + threshold")
        .value<double>("--noise-floor", "/sparsity/noise_floor", "linear noise floor (estimated when absent)");

    CLI::App* sounder = app.add_subcommand("sounder", "Zadoff-Chu channel sounding");
    sounder->require_subcommand(1);
    leaf(sounder, "sim", "simulate a sounding capture", "sounder sim")
        .value<std::size_t>("--length", "/sounder/length", "sequence length (odd)")
        .value<long long>("--root", "/sounder/root", "sequence root")
        .value<double>("--snr", "/sounder/snr_db", "per-sample SNR [dB]")
        .value<double>("--gamma-ns", "/sounder/gamma_ns", "PDP decay constant [ns]")
        .value<int>("--taps", "/sounder/n_taps", "number of channel taps")
        .value<double>("--delta-tau-ns", "/sounder/delta_tau_ns", "tap spacing [ns]")
        .value<std::size_t>("--periods", "/sounder/periods", "sequence repetitions");
    leaf(sounder, "extract", "CIR and MPCs from a capture", "sounder extract")
        .path("--iq", "/inputs/iq", "MCIQ1 capture")
        .value<std::size_t>("--length", "/sounder/length", "sequence length (odd)")
        .value<long long>("--root", "/sounder/root", "sequence root")
        .value<double>("--threshold-db", "/sounder/threshold_db", "MPC threshold above the noise floor [dB]")
        .value<double>("--delta-tau-ns", "/sounder/delta_tau_ns", "bin width [ns]");

    leaf(&app, "decompose", "split an envelope into SWIFT and small-scale parts", "decompose")
        .path("--data", "/inputs/data", "CSV with column amplitude")
        .value<std::size_t>("--group-size", "/decompose/group_size", "samples per averaging group")
        .value<double>("--sample-rate", "/decompose/sample_rate_hz", "envelope sample rate [Hz]");

    CLI::App* rep = app.add_subcommand("replay", "re-run a recorded manifest");
    rep->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
    rep->add_option("--out", replay_out, "output directory (default: the recorded one)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return kExitValidation;
    }

    try {
        if (rep->parsed())
            return replay(manifest_path, replay_out, out);

        std::string command;
        for (const Leaf& l : leaves)
            if (l.app->parsed())
                command = l.name;   // children follow their parent, so the deepest wins
        if (command.empty())
            throw DomainError("no command given");

        json cfg = default_config();
        if (!config_path.empty()) {
            json user;
            try {
                user = json::parse(io::read_text(config_path));
            } catch (const json::parse_error& e) {
                throw DomainError(config_path + ": " + e.what());
            }
            check_known_keys(user, cfg, "");
            if (user.contains("inputs"))
                for (auto& [k, v] : user["inputs"].items())
                    if (v.is_string())
                        v = fs::absolute(fs::path(config_path).parent_path() / v.get<std::string>()).string();
            cfg.merge_patch(user);
        }
        for (const Binding& b : bindings)
            if (b.option->count() > 0)
                b.apply(cfg);
        cfg["output_dir"] = fs::absolute(cfg.at("output_dir").get<std::string>()).string();
        return execute(command, cfg, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        err << "error: invalid config value: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int run(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace mariner::cli

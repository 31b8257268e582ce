// ringosc: command-line front end for the delay-coupled ring.
//
// Exit codes: 0 success, 2 domain or precondition error, 3 I/O error,
// 64 command-line usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringosc/experiments.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace ringosc;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 64;

// JSON config files: top-level keys are global options, nested objects are subcommands.
class ConfigJson : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return dump(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static json dump(const CLI::App* app, bool default_also) {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            const std::string name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& res = opt->results();
                j[name] = res.size() == 1 ? json(res.front()) : json(res);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            j[sub->get_name()] = dump(sub, default_also);
        }
        return j;
    }

    static void flatten(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        if (!j.is_object()) {
            throw CLI::ConversionError("config must be a JSON object");
        }
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto p = parents;
                p.push_back(key);
                flatten(value, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
            if (value.is_array()) {
                for (const auto& v : value) {
                    item.inputs.push_back(text(v));
                }
            } else {
                item.inputs.push_back(text(value));
            }
            out.push_back(std::move(item));
        }
    }
};

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

template <typename T>
T read_as(const fs::path& path) {
    const json j = read_json(path);
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        throw IoError("cannot write " + path);
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Globals {
    bool json_out = false;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct RingOpts {
    int n = 2;
    double omega = 1.0;
    double kappa = 1.0;
    double tau = 0.0;

    void add(CLI::App* cmd, bool with_n = true) {
        if (with_n) {
            cmd->add_option("--n", n, "Number of oscillators")->capture_default_str();
        }
        cmd->add_option("--omega", omega, "Natural frequency")->capture_default_str();
        cmd->add_option("--kappa", kappa, "Coupling strength")->capture_default_str();
        cmd->add_option("--tau", tau, "Base delay")->required();
    }
    [[nodiscard]] RingParams params() const { return {n, omega, kappa, tau}; }
};

struct RecognitionOpts {
    std::string config_file;
    double t_horizon = 50.0;
    double threshold = 0.9;
    double window = -1.0;
    std::string score = "order_parameter";
    double step = 0.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--recognition-config", config_file, "RecognitionConfig JSON (overrides the flags below)");
        cmd->add_option("--t-horizon", t_horizon, "Stop time T")->capture_default_str();
        cmd->add_option("--threshold", threshold, "Acceptance threshold")->capture_default_str();
        cmd->add_option("--window", window, "Averaging window (default: one period)");
        cmd->add_option("--score", score, "order_parameter or cross_correlation")
            ->check(CLI::IsMember({"order_parameter", "cross_correlation"}))
            ->capture_default_str();
        cmd->add_option("--step", step, "Integrator step (0 = default)");
    }

    [[nodiscard]] RecognitionConfig config() const {
        if (!config_file.empty()) {
            return read_as<RecognitionConfig>(config_file);
        }
        RecognitionConfig c;
        c.t_horizon = t_horizon;
        c.threshold = threshold;
        if (window >= 0.0) {
            c.window = window;
        }
        c.score = score == "cross_correlation" ? ScoreKind::CrossCorrelation : ScoreKind::OrderParameter;
        c.step = step;
        c.validate();
        return c;
    }
};

int choice_int(Choice c) { return static_cast<int>(c); }

const char* choice_name(Choice c) {
    switch (c) {
        case Choice::Pattern1: return "pattern1";
        case Choice::Pattern2: return "pattern2";
        case Choice::None: return "none";
    }
    return "?";
}

std::string params_comment(const json& params) { return "# params: " + params.dump() + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-coupled phase-oscillator ring: synchronisation analysis and pattern recognition"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<ConfigJson>());
    app.set_config("--config", "", "JSON config file (nested objects per subcommand)");
    Globals g;
    app.add_flag("--json", g.json_out, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Seed for randomised commands")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    std::function<void()> action;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Synchronous solutions and their stability");
    RingOpts a_ring;
    a_ring.add(analyze);
    bool a_roots = false;
    bool a_bounds = false;
    std::vector<double> a_region{-5.0, 5.0, -10.0, 10.0};
    analyze->add_flag("--roots", a_roots, "Also compute characteristic roots per solution");
    analyze->add_flag("--bounds", a_bounds, "Report the solution-count bounds (needs 2 kappa tau > pi)");
    analyze->add_option("--region", a_region, "Root search rectangle: re_lo re_hi im_lo im_hi")
        ->expected(4)
        ->delimiter(',');
    analyze->callback([&] {
        action = [&] {
            const auto params = a_ring.params();
            const auto set = find_sync_solutions(params);
            json out{{"params", params}, {"solutions", set.solutions}, {"n_stable", set.n_stable},
                     {"n_unstable", set.n_unstable}};
            std::ostringstream text;
            text << "index  omega_sync          K                   stable  residual    degenerate\n";
            for (std::size_t i = 0; i < set.solutions.size(); ++i) {
                const auto& s = set.solutions[i];
                char line[160];
                std::snprintf(line, sizeof line, "%5zu  %-18.12g  %-18.12g  %-6s  %-10.3g  %s\n", i, s.omega_sync,
                              s.stiffness, s.stable ? "yes" : "no", s.residual, s.degenerate ? "yes" : "no");
                text << line;
            }
            text << set.solutions.size() << " solutions, " << set.n_stable << " stable\n";
            if (a_bounds) {
                const auto b = count_bounds(params);
                out["bounds"] = {{"lower", b.lower},           {"upper", b.upper},
                                 {"floor_lower", b.floor_lower}, {"lower_holds", b.check},
                                 {"floor_lower_holds", b.floor_check}, {"upper_holds", b.upper_check}};
                text << "bounds: lower " << num(b.lower) << (b.check ? " holds" : " violated") << ", floor "
                     << num(b.floor_lower) << (b.floor_check ? " holds" : " violated") << ", upper " << num(b.upper)
                     << (b.upper_check ? " holds" : " violated") << "\n";
            }
            if (a_roots) {
                const ComplexRect rect{a_region[0], a_region[1], a_region[2], a_region[3]};
                json roots = json::array();
                for (std::size_t i = 0; i < set.solutions.size(); ++i) {
                    const auto res = characteristic_roots(params, set.solutions[i], rect, g.threads);
                    double max_re = -1e300;
                    json list = json::array();
                    for (const auto& r : res.roots) {
                        list.push_back({{"branch", r.branch_index}, {"re", r.mu.real()}, {"im", r.mu.imag()},
                                        {"residual", r.residual}});
                        max_re = std::max(max_re, r.mu.real());
                    }
                    roots.push_back({{"solution", i}, {"roots", list}, {"unresolved_cells", res.unresolved.size()}});
                    text << "solution " << i << ": " << res.roots.size() << " roots, max Re " << num(max_re) << ", "
                         << res.unresolved.size() << " unresolved cells\n";
                }
                out["characteristic_roots"] = roots;
            }
            std::cout << (g.json_out ? out.dump(2) + "\n" : text.str());
        };
    });

    // bifurcate
    auto* bif = app.add_subcommand("bifurcate", "Fold and transcritical points of the synchronous branches");
    double b_omega = 1.0, b_kappa = 1.0, b_tau_min = 0.0, b_tau_max = 0.0, b_ds = 1e-3;
    std::string b_branch_csv;
    bif->add_option("--omega", b_omega, "Natural frequency")->capture_default_str();
    bif->add_option("--kappa", b_kappa, "Coupling strength")->capture_default_str();
    bif->add_option("--tau-min", b_tau_min, "Lower end of the delay range")->capture_default_str();
    bif->add_option("--tau-max", b_tau_max, "Upper end of the delay range")->required();
    bif->add_option("--branch-csv", b_branch_csv, "Write the sampled branch (s, tau, Omega, K) as CSV");
    bif->add_option("--ds", b_ds, "Branch sampling pitch in s = Omega tau")->capture_default_str();
    bif->callback([&] {
        action = [&] {
            const auto list = find_bifurcations(b_omega, b_kappa, {b_tau_min, b_tau_max});
            json out = json::array();
            std::ostringstream text;
            text << "kind           tau                 omega_sync          degenerate\n";
            for (const auto& b : list) {
                out.push_back({{"kind", to_string(b.kind)}, {"tau", b.tau}, {"omega_sync", b.omega_sync}, {"s", b.s},
                               {"degenerate", b.degenerate}});
                char line[160];
                std::snprintf(line, sizeof line, "%-13s  %-18.12g  %-18.12g  %s\n", to_string(b.kind), b.tau,
                              b.omega_sync, b.degenerate ? "yes" : "no");
                text << line;
            }
            if (!b_branch_csv.empty()) {
                const double s_max = b_tau_max * (std::abs(b_omega) + std::abs(b_kappa)) + 1.0;
                std::ostringstream csv;
                csv << params_comment({{"omega", b_omega}, {"kappa", b_kappa}, {"tau_min", b_tau_min},
                                       {"tau_max", b_tau_max}, {"ds", b_ds}});
                csv << "s,tau,omega_sync,K,stable,segment\n";
                for (const auto& p : trace_branch(b_omega, b_kappa, {-s_max, s_max}, b_ds)) {
                    if (p.tau < b_tau_min || p.tau > b_tau_max) {
                        continue;
                    }
                    csv << num(p.s) << ',' << num(p.tau) << ',' << num(p.omega_sync) << ',' << num(p.stiffness) << ','
                        << (p.stable ? 1 : 0) << ',' << p.segment << '\n';
                }
                write_text(b_branch_csv, csv.str());
            }
            std::cout << (g.json_out ? out.dump(2) + "\n" : text.str());
        };
    });

    // encode
    auto* enc_cmd = app.add_subcommand("encode", "Compute the delays that encode a firing pattern");
    std::string e_pattern, e_out;
    RingOpts e_ring;
    int e_solution = -1;
    e_ring.add(enc_cmd, false);
    enc_cmd->add_option("--pattern", e_pattern, "Pattern JSON (array of firing times)")->required();
    enc_cmd->add_option("--solution", e_solution, "Index of the reference solution (default: closest stable)");
    enc_cmd->add_option("-o,--out", e_out, "Output file (default stdout)");
    enc_cmd->callback([&] {
        action = [&] {
            const auto pattern = read_as<Pattern>(e_pattern);
            RingParams params = e_ring.params();
            params.n = static_cast<int>(pattern.size());
            const auto set = find_sync_solutions(params);
            SyncSolution ref;
            if (e_solution < 0) {
                ref = closest_stable(set);
            } else if (static_cast<std::size_t>(e_solution) < set.solutions.size()) {
                ref = set.solutions[static_cast<std::size_t>(e_solution)];
            } else {
                throw DomainError("solution index out of range (" + std::to_string(set.solutions.size()) +
                                  " solutions)");
            }
            write_text(e_out, json(encode(params, pattern, ref)).dump(2) + "\n");
        };
    });

    // ingest
    auto* ing = app.add_subcommand("ingest", "Turn a PCM16 WAV file into a pattern");
    std::string i_wav, i_out;
    std::size_t i_fft = 4096, i_n = 128;
    double i_cutoff = 4000.0, i_tau = 3.0, i_beta = 0.5;
    bool i_raw = false;
    ing->add_option("--wav", i_wav, "Input WAV file")->required();
    ing->add_option("--fft-size", i_fft, "FFT length (power of two)")->capture_default_str();
    ing->add_option("--cutoff-hz", i_cutoff, "Discard spectrum above this frequency")->capture_default_str();
    ing->add_option("--n", i_n, "Number of pattern sites")->capture_default_str();
    ing->add_option("--tau", i_tau, "Base delay the pattern is scaled for")->capture_default_str();
    ing->add_option("--beta", i_beta, "Largest forward difference as a fraction of tau")->capture_default_str();
    ing->add_flag("--raw", i_raw, "Use the first n waveform samples instead of the spectrum");
    ing->add_option("-o,--out", i_out, "Output file (default stdout)");
    ing->callback([&] {
        action = [&] {
            const auto clip = load_wav(i_wav);
            Pattern p;
            if (i_raw) {
                p = raw_pattern(clip, i_n, i_tau, i_beta);
            } else {
                p = ingest(clip, {clip.sample_rate, i_fft, i_cutoff, i_n, i_beta}, i_tau);
            }
            write_text(i_out, json(p).dump() + "\n");
        };
    });

    // recognize
    auto* rec = app.add_subcommand("recognize", "Score a probe pattern against an encoding");
    std::string r_enc, r_probe;
    RecognitionOpts r_opts;
    rec->add_option("--encoding", r_enc, "Encoding JSON")->required();
    rec->add_option("--probe", r_probe, "Probe pattern JSON")->required();
    r_opts.add(rec);
    rec->callback([&] {
        action = [&] {
            const auto enc = read_as<Encoding>(r_enc);
            const auto probe = read_as<Pattern>(r_probe);
            const auto cfg = r_opts.config();
            const auto r = recognize(enc, probe, cfg);
            if (g.json_out) {
                std::cout << json{{"score", r.score}, {"accepted", r.accepted}, {"config", cfg}}.dump(2) << "\n";
            } else {
                std::cout << "score " << num(r.score) << (r.accepted ? " accepted" : " rejected") << "\n";
            }
        };
    });

    // classify
    auto* cls = app.add_subcommand("classify", "Decide between two encodings");
    std::string c_enc1, c_enc2, c_probe;
    RecognitionOpts c_opts;
    cls->add_option("--enc1", c_enc1, "First encoding JSON")->required();
    cls->add_option("--enc2", c_enc2, "Second encoding JSON")->required();
    cls->add_option("--probe", c_probe, "Probe pattern JSON")->required();
    c_opts.add(cls);
    cls->callback([&] {
        action = [&] {
            const auto cfg = c_opts.config();
            const auto d = classify(read_as<Encoding>(c_enc1), read_as<Encoding>(c_enc2), read_as<Pattern>(c_probe), cfg);
            if (g.json_out) {
                std::cout << json{{"decision", choice_int(d.value)}, {"label", choice_name(d.value)},
                                  {"score1", d.score1},          {"score2", d.score2},
                                  {"tie", d.tie}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << choice_name(d.value) << " (score1 " << num(d.score1) << ", score2 " << num(d.score2)
                          << (d.tie ? ", tie" : "") << ")\n";
            }
        };
    });

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Grid search for the stop time T and threshold theta");
    std::vector<std::string> k_encs;
    std::string k_labeled, k_out;
    std::vector<double> k_t_grid{25.0, 50.0};
    std::vector<double> k_theta_grid;
    RecognitionOpts k_opts;
    cal->add_option("--encoding", k_encs, "Encoding JSON (one or two)")->required()->expected(1, 2);
    cal->add_option("--labeled", k_labeled, "JSON list of {\"probe\": [...], \"label\": -1|0|1}")->required();
    cal->add_option("--t-grid", k_t_grid, "Candidate stop times")->delimiter(',')->capture_default_str();
    cal->add_option("--theta-grid", k_theta_grid, "Candidate thresholds (default: 1 - 10^(-k/4), k = 4..32)")
        ->delimiter(',');
    k_opts.add(cal);
    cal->add_option("-o,--out", k_out, "Write the chosen RecognitionConfig here");
    cal->callback([&] {
        action = [&] {
            std::vector<Encoding> encs;
            for (const auto& e : k_encs) {
                encs.push_back(read_as<Encoding>(e));
            }
            const json lj = read_json(k_labeled);
            std::vector<LabeledProbe> labeled;
            try {
                for (const auto& item : lj) {
                    labeled.push_back({item.at("probe").get<Pattern>(), item.at("label").get<int>()});
                }
            } catch (const json::exception& e) {
                throw IoError(k_labeled + ": " + e.what());
            }
            const auto thetas = k_theta_grid.empty() ? default_theta_grid() : k_theta_grid;
            const auto res = calibrate(encs, labeled, k_t_grid, thetas, k_opts.config(), g.threads);
            if (!k_out.empty()) {
                write_text(k_out, json(res.config).dump(2) + "\n");
            }
            if (g.json_out) {
                std::cout << json{{"config", res.config}, {"accuracy", res.accuracy}}.dump(2) << "\n";
            } else {
                std::cout << "T " << num(res.config.t_horizon) << ", theta " << num(res.config.threshold)
                          << ", accuracy " << num(res.accuracy) << "\n";
            }
        };
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a scripted experiment and write CSV data");
    std::string x_name, x_out, x_overrides;
    std::vector<std::string> x_set;
    double x_t_end = -1.0;
    bool x_paper_scale = false;
    exp->add_option("name", x_name, "PerturbationMap, BasinMap, SineDiscrimination or SpeechSurrogate")->required();
    exp->add_option("--out", x_out, "Output directory (default out/<name>)");
    exp->add_option("--overrides", x_overrides, "JSON file holding an object of parameter overrides");
    exp->add_option("--set", x_set, "Override key=value (value parsed as JSON, dotted keys for nesting)");
    exp->add_option("--t-end", x_t_end, "Override the integration end time");
    exp->add_flag("--paper-scale", x_paper_scale, "BasinMap: integrate to T = 50000");
    exp->callback([&] {
        action = [&] {
            ExperimentSpec spec;
            spec.name = experiment_from_string(x_name);
            spec.seed = g.seed;
            spec.threads = g.threads;
            if (!x_overrides.empty()) {
                spec.overrides = read_json(x_overrides);
            }
            for (const auto& kv : x_set) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw DomainError("--set expects key=value, got '" + kv + "'");
                }
                json value;
                try {
                    value = json::parse(kv.substr(eq + 1));
                } catch (const json::exception&) {
                    value = kv.substr(eq + 1);
                }
                json* node = &spec.overrides;
                std::string key = kv.substr(0, eq);
                for (auto dot = key.find('.'); dot != std::string::npos; dot = key.find('.')) {
                    node = &(*node)[key.substr(0, dot)];
                    key = key.substr(dot + 1);
                }
                (*node)[key] = value;
            }
            if (x_paper_scale) {
                if (spec.name != ExperimentName::BasinMap) {
                    throw DomainError("--paper-scale applies to BasinMap only");
                }
                spec.overrides["t_end"] = 50000.0;
            }
            if (x_t_end > 0.0) {
                if (spec.name != ExperimentName::PerturbationMap && spec.name != ExperimentName::BasinMap &&
                    spec.name != ExperimentName::SineDiscrimination) {
                    throw DomainError("--t-end does not apply to " + x_name);
                }
                spec.overrides["t_end"] = x_t_end;
            }
            const fs::path dir = x_out.empty() ? fs::path("out") / x_name : fs::path(x_out);
            const auto report = run_experiment(spec, dir);
            json files = json::array();
            for (const auto& f : report.files) {
                files.push_back(f.string());
            }
            const json out{{"experiment", report.name}, {"params", report.params}, {"summary", report.summary},
                           {"files", files}};
            write_text((dir / "report.json").string(), out.dump(2) + "\n");
            if (g.json_out) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << report.name << ": " << report.summary.dump() << "\n";
                for (const auto& f : report.files) {
                    std::cout << "  wrote " << f.string() << "\n";
                }
            }
        };
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate the ring from a ramp history and write the trajectory");
    RingOpts s_ring;
    std::string s_encoding, s_probe, s_out, s_crossings;
    double s_slope = std::numeric_limits<double>::quiet_NaN();
    double s_t_end = 100.0, s_step = 0.0;
    std::size_t s_stride = 1;
    sim->add_option("--n", s_ring.n, "Number of oscillators")->capture_default_str();
    sim->add_option("--omega", s_ring.omega, "Natural frequency")->capture_default_str();
    sim->add_option("--kappa", s_ring.kappa, "Coupling strength")->capture_default_str();
    sim->add_option("--tau", s_ring.tau, "Homogeneous delay (ignored with --encoding)");
    sim->add_option("--encoding", s_encoding, "Use the delays of an encoding; the history is its probe ramp");
    sim->add_option("--probe", s_probe, "Probe pattern for --encoding (default: the encoded pattern)");
    sim->add_option("--slope", s_slope, "Ramp slope of the history x_j(t) = slope t (default omega)");
    sim->add_option("--t-end", s_t_end, "End time")->capture_default_str();
    sim->add_option("--step", s_step, "Step size (0 = default)");
    sim->add_option("--stride", s_stride, "Record every stride-th step")->capture_default_str();
    sim->add_option("-o,--out", s_out, "Trajectory CSV (default stdout)");
    sim->add_option("--crossings", s_crossings, "Write upward 0 mod 2 pi crossing times as JSON");
    sim->callback([&] {
        action = [&] {
            RingParams params;
            DelayVector delays;
            std::optional<HistoryFunction> hist;
            json meta;
            if (!s_encoding.empty()) {
                const auto enc = read_as<Encoding>(s_encoding);
                params = enc.params;
                delays = enc.delays;
                const Pattern probe = s_probe.empty() ? enc.pattern : read_as<Pattern>(s_probe);
                hist = probe_history(enc, probe);
                meta = {{"encoding", s_encoding}, {"probe", probe}};
            } else {
                params = s_ring.params();
                params.validate();
                delays = DelayVector::homogeneous(params.n, params.tau);
                const double slope = std::isnan(s_slope) ? params.omega : s_slope;
                hist = HistoryFunction::linear_ramp(slope, std::vector<double>(static_cast<std::size_t>(params.n), 0.0),
                                                    delays.max());
                meta = {{"slope", slope}};
            }
            IntegrationOptions opts;
            opts.step = s_step;
            opts.stride = std::max<std::size_t>(1, s_stride);
            const auto traj = integrate(params, delays, *hist, s_t_end, opts);
            meta["params"] = params;
            meta["delays"] = delays.delays;
            meta["t_end"] = s_t_end;
            meta["step"] = s_step > 0.0 ? s_step : default_step(delays);
            meta["stride"] = opts.stride;
            std::ostringstream csv;
            csv << params_comment(meta) << "t";
            for (int j = 0; j < params.n; ++j) {
                csv << ",x" << j;
            }
            csv << ",r\n";
            for (std::size_t k = 0; k < traj.samples(); ++k) {
                csv << num(traj.times[k]);
                for (std::size_t j = 0; j < traj.n; ++j) {
                    csv << ',' << num(traj.phase(k, j));
                }
                csv << ',' << num(traj.order_param[k]) << '\n';
            }
            write_text(s_out, csv.str());
            if (!s_crossings.empty()) {
                write_text(s_crossings, json(crossing_times(traj, wrap_phase(0.0))).dump() + "\n");
            }
        };
    });

    // synth
    auto* syn = app.add_subcommand("synth", "Write a synthetic test signal as PCM16 WAV");
    std::vector<double> y_freqs, y_amps;
    double y_duration = 1.0, y_rate = 8000.0, y_snr = std::numeric_limits<double>::infinity();
    std::string y_out;
    syn->add_option("--freq", y_freqs, "Tone frequency in Hz (repeatable)")->required()->delimiter(',');
    syn->add_option("--amp", y_amps, "Tone amplitude (repeatable, default 1/number of tones)")->delimiter(',');
    syn->add_option("--duration", y_duration, "Seconds")->capture_default_str();
    syn->add_option("--rate", y_rate, "Sample rate in Hz")->capture_default_str();
    syn->add_option("--snr", y_snr, "Add white noise at this SNR in dB");
    syn->add_option("-o,--out", y_out, "Output WAV")->required();
    syn->callback([&] {
        action = [&] {
            if (!y_amps.empty() && y_amps.size() != y_freqs.size()) {
                throw DomainError("--amp must be given once per --freq");
            }
            MultiTone mt;
            for (std::size_t i = 0; i < y_freqs.size(); ++i) {
                mt.tones.push_back({y_freqs[i], y_amps.empty() ? 1.0 / static_cast<double>(y_freqs.size()) : y_amps[i], 0.0});
            }
            auto clip = synthesize(mt, y_duration, y_rate);
            if (std::isfinite(y_snr)) {
                add_noise(clip, y_snr, g.seed);
            }
            save_wav(y_out, clip);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (action) {
            action();
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

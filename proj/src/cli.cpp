#include "poolforge/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "poolforge/rng.hpp"
#include "poolforge/simsiam.hpp"

namespace poolforge::cli {

namespace {

constexpr ConfigKey kKeys[] = {
    {"data.train", "", "train feature file (PFV1); empty to generate blobs"},
    {"data.test", "", "test feature file (PFV1)"},
    {"data.classes", "10", "generator: number of classes"},
    {"data.per_class", "200", "generator: samples per class before the 80/20 split"},
    {"data.dim", "16", "generator: informative dimensions"},
    {"data.noise_dim", "48", "generator: pure-noise dimensions"},
    {"data.sigma", "0.3", "generator: within-class standard deviation"},
    {"data.seed", "0", "generator seed"},
    {"schedule.initial", "16", "initial labeled samples; also the per-cycle budget"},
    {"schedule.cycles", "10", "acquisition cycles"},
    {"schedule.balanced", "true", "class-balanced initial pool"},
    {"experiment.mode", "self_train", "self_train or scratch"},
    {"experiment.net", "", "pre-trained PSN1 net; skips self-supervised training"},
    {"experiment.timing", "false", "record wall time per cycle (breaks byte-identical output)"},
    {"sweep.methods", "random", "comma list: random, entropy, kcenter, svm_min_margin"},
    {"sweep.seeds", "", "comma list of master seeds (default: POOLFORGE_SEED or 0)"},
    {"sweep.jobs", "1", "runs executed concurrently"},
    {"probe.epochs", "100", "probe epochs"},
    {"probe.batch_size", "256", "probe batch size (capped at the labeled count)"},
    {"probe.lr", "1.0", "probe base learning rate"},
    {"probe.momentum", "0.9", "probe momentum"},
    {"probe.weight_decay", "0", "probe weight decay"},
    {"probe.schedule", "cosine", "cosine or constant"},
    {"scratch.epochs", "100", "scratch-mode network epochs"},
    {"scratch.batch_size", "256", "scratch-mode batch size (capped at the labeled count)"},
    {"scratch.lr", "0.1", "scratch-mode base learning rate"},
    {"scratch.momentum", "0.9", "scratch-mode momentum"},
    {"scratch.weight_decay", "0", "scratch-mode weight decay"},
    {"scratch.schedule", "cosine", "cosine or constant"},
    {"siam.epochs", "50", "self-supervised epochs"},
    {"siam.batch_size", "64", "self-supervised batch size"},
    {"siam.lr", "0.1", "self-supervised base learning rate"},
    {"siam.momentum", "0.9", "self-supervised momentum"},
    {"siam.weight_decay", "0.0001", "self-supervised weight decay"},
    {"siam.encoder", "64,32", "encoder widths after the input"},
    {"siam.predictor_hidden", "16", "predictor hidden width"},
    {"augment.noise_sigma", "0.3", "additive Gaussian noise"},
    {"augment.scale_lo", "0.8", "lower bound of the random scale"},
    {"augment.scale_hi", "1.2", "upper bound of the random scale"},
    {"augment.drop_prob", "0.1", "coordinate dropout probability"},
    {"svm.c", "5", "SVM regularization"},
    {"svm.normalize", "false", "divide decision values by |w_k|"},
    {"svm.tolerance", "1e-6", "relative duality gap tolerance"},
    {"svm.max_sweeps", "10000", "coordinate descent sweep cap"},
    {"output.dir", "results", "directory for results.csv and runs.jsonl"},
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool known_key(std::string_view key) {
    return std::ranges::any_of(kKeys, [&](const ConfigKey& k) { return k.name == key; });
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    fail(ErrorCode::config_error,
         std::string(key) + " = \"" + std::string(value) + "\" is not " + std::string(expected));
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
        bad_value(key, value, "a non-negative integer");
    }
    return v;
}

double parse_double(std::string_view key, std::string_view value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) bad_value(key, value, "a number");
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "a boolean");
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    std::string current;
    std::istringstream in{std::string(value)};
    while (std::getline(in, current, ',')) {
        auto item = trim(current);
        if (!item.empty()) items.push_back(std::move(item));
    }
    return items;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

KeyValues parse_config_text(std::string_view text) {
    KeyValues values;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const std::string line = trim(raw);
        const std::string where = "line " + std::to_string(line_no);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            require(line.back() == ']' && line.size() > 2, ErrorCode::config_error, where + ": bad section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorCode::config_error, where + ": expected key = value");
        require(!section.empty(), ErrorCode::config_error, where + ": key outside any [section]");
        const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
        require(known_key(key), ErrorCode::config_error, where + ": unknown key " + key);
        require(!values.contains(key), ErrorCode::config_error, where + ": duplicate key " + key);
        values[key] = trim(std::string_view(line).substr(eq + 1));
    }
    return values;
}

KeyValues load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::missing_file, "cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

CliConfig resolve_config(const KeyValues& file, const KeyValues& overrides, std::uint64_t default_seed) {
    KeyValues merged;
    for (const auto& key : kKeys) merged[std::string(key.name)] = std::string(key.default_value);
    for (const KeyValues* layer : {&file, &overrides}) {
        for (const auto& [key, value] : *layer) {
            require(known_key(key), ErrorCode::config_error, "unknown key " + key);
            merged[key] = value;
        }
    }
    auto get = [&](std::string_view key) -> const std::string& { return merged.at(std::string(key)); };
    auto size = [&](std::string_view key) { return static_cast<std::size_t>(parse_u64(key, get(key))); };
    auto real = [&](std::string_view key) { return parse_double(key, get(key)); };
    auto flag = [&](std::string_view key) { return parse_bool(key, get(key)); };

    auto train_config = [&](const std::string& section) {
        ProbeTrainConfig t;
        t.epochs = size(section + ".epochs");
        t.batch_size = size(section + ".batch_size");
        t.base_lr = real(section + ".lr");
        t.momentum = real(section + ".momentum");
        t.weight_decay = real(section + ".weight_decay");
        const auto& schedule = get(section + ".schedule");
        if (schedule == "cosine") {
            t.lr_schedule = LrSchedule::cosine;
        } else if (schedule == "constant") {
            t.lr_schedule = LrSchedule::constant;
        } else {
            bad_value(section + ".schedule", schedule, "cosine or constant");
        }
        validate(t);
        return t;
    };

    CliConfig cfg;
    if (!get("data.train").empty() || !get("data.test").empty()) {
        require(!get("data.train").empty() && !get("data.test").empty(), ErrorCode::config_error,
                "data.train and data.test must be given together");
        cfg.train_path = get("data.train");
        cfg.test_path = get("data.test");
    }
    cfg.blobs = {size("data.classes"), size("data.per_class"), size("data.dim"), size("data.noise_dim"),
                 real("data.sigma"), parse_u64("data.seed", get("data.seed"))};
    if (!get("experiment.net").empty()) cfg.net_path = get("experiment.net");

    auto& e = cfg.experiment;
    e.schedule = BudgetSchedule::equal(size("schedule.initial"), size("schedule.cycles"));
    e.balanced_split = flag("schedule.balanced");
    e.mode = parse_mode(get("experiment.mode"));
    e.measure_time = flag("experiment.timing");

    e.probe = train_config("probe");
    e.scratch = train_config("scratch");

    e.siam.epochs = size("siam.epochs");
    e.siam.batch_size = size("siam.batch_size");
    e.siam.base_lr = real("siam.lr");
    e.siam.momentum = real("siam.momentum");
    e.siam.weight_decay = real("siam.weight_decay");
    validate(e.siam);
    e.siam_net.encoder_widths.clear();
    for (const auto& w : split_list(get("siam.encoder"))) {
        e.siam_net.encoder_widths.push_back(static_cast<std::size_t>(parse_u64("siam.encoder", w)));
    }
    require(!e.siam_net.encoder_widths.empty(), ErrorCode::config_error, "siam.encoder needs at least one width");
    e.siam_net.predictor_hidden = size("siam.predictor_hidden");

    e.augment = {real("augment.noise_sigma"), real("augment.scale_lo"), real("augment.scale_hi"),
                 real("augment.drop_prob")};
    validate(e.augment);

    e.svm_c = real("svm.c");
    require(e.svm_c > 0.0, ErrorCode::config_error, "svm.c must be positive");
    e.svm_normalize = flag("svm.normalize");
    e.svm_solver.tolerance = real("svm.tolerance");
    e.svm_solver.max_sweeps = size("svm.max_sweeps");

    for (const auto& m : split_list(get("sweep.methods"))) cfg.methods.push_back(parse_method(m));
    require(!cfg.methods.empty(), ErrorCode::config_error, "sweep.methods is empty");
    for (const auto& s : split_list(get("sweep.seeds"))) cfg.seeds.push_back(parse_u64("sweep.seeds", s));
    if (cfg.seeds.empty()) cfg.seeds.push_back(default_seed);
    cfg.jobs = std::max<std::size_t>(1, size("sweep.jobs"));
    cfg.out_dir = get("output.dir");

    std::ostringstream data;
    if (cfg.train_path) {
        data << "files:" << cfg.train_path->string() << ';' << cfg.test_path->string();
    } else {
        const auto& b = cfg.blobs;
        data << "blobs:" << b.num_classes << ',' << b.per_class << ',' << b.dim << ',' << b.noise_dim << ','
             << format_double(b.sigma) << ',' << b.seed;
    }
    if (cfg.net_path) data << ";net:" << cfg.net_path->string();
    e.data_description = data.str();
    return cfg;
}

// --- CSV ---------------------------------------------------------------------------

std::vector<ResultRow> rows_from_run(const RunResult& result, std::uint64_t seed) {
    std::vector<ResultRow> rows;
    for (const auto& r : result.records) {
        rows.push_back({std::string(to_string(r.method)), std::string(to_string(r.mode)), seed, r.cycle,
                        r.labeled_count, r.test_accuracy, r.wall_time});
    }
    return rows;
}

std::string format_results_csv(std::span<const ResultRow> rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.method + ',' + r.mode + ',' + std::to_string(r.seed) + ',' + std::to_string(r.cycle) + ',' +
               std::to_string(r.labeled) + ',' + format_double(r.accuracy) + ',' + format_double(r.wall_time) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && trim(line) == kCsvHeader, ErrorCode::config_error,
            "results file does not start with the expected header");
    std::vector<ResultRow> rows;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::istringstream cells(trim(line));
        std::string cell;
        while (std::getline(cells, cell, ',')) fields.push_back(cell);
        require(fields.size() == 7, ErrorCode::config_error, "results line " + std::to_string(line_no) + " has " +
                                                                 std::to_string(fields.size()) + " fields");
        ResultRow row;
        row.method = fields[0];
        row.mode = fields[1];
        row.seed = parse_u64("seed", fields[2]);
        row.cycle = static_cast<std::size_t>(parse_u64("cycle", fields[3]));
        row.labeled = static_cast<std::size_t>(parse_u64("labeled", fields[4]));
        row.accuracy = parse_double("accuracy", fields[5]);
        row.wall_time = parse_double("wall_time_s", fields[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LearningCurve> curves_from_rows(std::span<const ResultRow> rows) {
    std::vector<LearningCurve> curves;
    std::vector<std::uint64_t> seeds;
    for (const auto& r : rows) {
        std::size_t slot = 0;
        while (slot < curves.size() &&
               !(curves[slot].method == r.method && curves[slot].mode == r.mode && seeds[slot] == r.seed)) {
            ++slot;
        }
        if (slot == curves.size()) {
            curves.push_back({{}, {}, r.method, r.mode, 1});
            seeds.push_back(r.seed);
        }
        curves[slot].budgets.push_back(r.labeled);
        curves[slot].accuracies.push_back(r.accuracy);
    }
    for (const auto& c : curves) validate(c);
    return curves;
}

std::vector<LearningCurve> averaged_curves(std::span<const ResultRow> rows) {
    const auto per_seed = curves_from_rows(rows);
    std::vector<LearningCurve> out;
    std::vector<bool> used(per_seed.size(), false);
    for (std::size_t i = 0; i < per_seed.size(); ++i) {
        if (used[i]) continue;
        std::vector<LearningCurve> group;
        for (std::size_t j = i; j < per_seed.size(); ++j) {
            if (!used[j] && per_seed[j].method == per_seed[i].method && per_seed[j].mode == per_seed[i].mode) {
                group.push_back(per_seed[j]);
                used[j] = true;
            }
        }
        out.push_back(average_curves(group));
    }
    return out;
}

// --- Commands ------------------------------------------------------------------------

namespace {

std::uint64_t env_seed() {
    const char* value = std::getenv("POOLFORGE_SEED");
    if (value == nullptr || *value == '\0') return 0;
    return parse_u64("POOLFORGE_SEED", value);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    require(out.good(), ErrorCode::io_failure, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::missing_file, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct GenDataArgs {
    BlobSpec spec;
    std::string out;
};

int cmd_gen_data(const GenDataArgs& args, std::ostream& out) {
    const auto [train, test] = generate_blobs(args.spec);
    const std::filesystem::path dir(args.out);
    std::filesystem::create_directories(dir);
    save_dataset(train, dir / "train.pfv");
    save_dataset(test, dir / "test.pfv");
    out << (dir / "train.pfv").string() << '\n' << (dir / "test.pfv").string() << '\n';
    return 0;
}

struct SelfTrainArgs {
    std::string train;
    std::string out;
    SiamTrainConfig siam;
    SiamNetConfig net;
    AugmentConfig augment{0.3, 0.8, 1.2, 0.1};
    std::vector<std::size_t> encoder = {64, 32};
};

int cmd_selftrain(SelfTrainArgs args, std::ostream& out) {
    const FeatureDataset train = load_dataset(args.train);
    args.net.encoder_widths = args.encoder;
    SiamTrainConfig siam = args.siam;
    // Same derivation as run_experiment, so `selftrain --seed S` reproduces
    // the backbone a self_train run with master seed S would build.
    siam.seed = derive_seed(args.siam.seed, "siam");
    SiamTrainTrace trace;
    const SiamNet net = train_simsiam(train, args.net, args.augment, siam, &trace);
    save_siam_net(net, args.out);
    out << "final_loss=" << format_double(trace.epoch_losses.back()) << '\n' << args.out << '\n';
    return 0;
}

struct RunArgs {
    std::string config;
    KeyValues overrides;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    const KeyValues file = args.config.empty() ? KeyValues{} : load_config_file(args.config);
    const CliConfig cfg = resolve_config(file, args.overrides, env_seed());

    FeatureDataset train;
    FeatureDataset test;
    if (cfg.train_path) {
        train = load_dataset(*cfg.train_path, Split::train);
        test = load_dataset(*cfg.test_path, Split::test);
    } else {
        std::tie(train, test) = generate_blobs(cfg.blobs);
    }
    ExperimentConfig base = cfg.experiment;
    if (cfg.net_path) base.pretrained = load_siam_net(*cfg.net_path);
    validate(base.schedule, train.size());

    struct Member {
        Method method;
        std::uint64_t seed;
        std::optional<RunResult> result;
        std::string error;
    };
    std::vector<Member> members;
    for (Method m : cfg.methods) {
        for (std::uint64_t s : cfg.seeds) members.push_back({m, s, std::nullopt, {}});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < members.size(); i = next++) {
            ExperimentConfig config = base;
            config.method = members[i].method;
            config.seed = members[i].seed;
            try {
                members[i].result = run_experiment(config, train, test);
            } catch (const std::exception& e) {
                members[i].error = e.what();
            }
        }
    };
    const std::size_t workers = std::min(cfg.jobs, members.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Rows follow sweep order regardless of completion order.
    std::vector<ResultRow> rows;
    std::string sidecar;
    bool failed = false;
    for (const auto& m : members) {
        ExperimentConfig config = base;
        config.method = m.method;
        config.seed = m.seed;
        nlohmann::ordered_json line;
        line["method"] = to_string(m.method);
        line["mode"] = to_string(base.mode);
        line["seed"] = m.seed;
        line["fingerprint"] = hex(fingerprint(config));
        if (m.result) {
            const auto run_rows = rows_from_run(*m.result, m.seed);
            rows.insert(rows.end(), run_rows.begin(), run_rows.end());
            line["status"] = "ok";
            line["records"] = m.result->records.size();
            line["oracle_reveals"] = m.result->diagnostics.oracle_reveals;
            line["simsiam_trainings"] = m.result->diagnostics.simsiam_trainings;
        } else {
            failed = true;
            line["status"] = "error";
            line["error"] = m.error;
            err << "run " << to_string(m.method) << " seed " << m.seed << " failed: " << m.error << '\n';
        }
        sidecar += line.dump() + '\n';
    }

    std::filesystem::create_directories(cfg.out_dir);
    const auto csv_path = cfg.out_dir / "results.csv";
    const auto jsonl_path = cfg.out_dir / "runs.jsonl";
    write_text(csv_path, format_results_csv(rows));
    write_text(jsonl_path, sidecar);
    out << csv_path.string() << '\n' << jsonl_path.string() << '\n';
    return failed ? 1 : 0;
}

struct AdviseArgs {
    std::vector<std::string> results;
    std::vector<std::size_t> results_classes;
    std::vector<std::string> points;
    std::string mode = "self_train";
    std::string fit_method = "entropy";
    std::optional<std::size_t> classes;
};

ThresholdPoint parse_point(const std::string& text) {
    const auto colon = text.find(':');
    require(colon != std::string::npos, ErrorCode::config_error, "point \"" + text + "\" is not C:SPC");
    return {parse_double("point", text.substr(0, colon)), parse_double("point", text.substr(colon + 1))};
}

int cmd_advise(const AdviseArgs& args, std::ostream& out) {
    require(!args.results.empty() || !args.points.empty(), ErrorCode::config_error,
            "advise needs --results or --point");
    require(args.results_classes.empty() || args.results_classes.size() == args.results.size(),
            ErrorCode::config_error, "--results-classes must be given once per --results");

    std::vector<ThresholdPoint> points;
    for (const auto& p : args.points) points.push_back(parse_point(p));

    for (std::size_t f = 0; f < args.results.size(); ++f) {
        const auto rows = parse_results_csv(read_text(args.results[f]));
        const auto curves = averaged_curves(rows);
        std::vector<std::string> modes;
        for (const auto& c : curves) {
            if (std::ranges::find(modes, c.mode) == modes.end()) modes.push_back(c.mode);
        }
        for (const auto& mode : modes) {
            const auto random = std::ranges::find_if(
                curves, [&](const LearningCurve& c) { return c.mode == mode && c.method == "random"; });
            require(random != curves.end(), ErrorCode::missing_baseline,
                    args.results[f] + " has no random baseline for mode " + mode);
            for (const auto& c : curves) {
                if (c.mode != mode || c.method == "random") continue;
                const auto crossover = find_crossover(c, *random);
                out << "crossover file=" << args.results[f] << " mode=" << mode << " method=" << c.method
                    << " seeds=" << c.seeds << " budget=" << (crossover ? std::to_string(*crossover) : "none")
                    << '\n';
                if (crossover && !args.results_classes.empty() && mode == args.mode && c.method == args.fit_method) {
                    const auto classes = static_cast<double>(args.results_classes[f]);
                    points.push_back({classes, static_cast<double>(*crossover) / classes});
                }
            }
        }
    }

    if (points.size() >= 2) {
        const LineFit fit = fit_threshold_line(points);
        out << "fit points=" << points.size() << " slope=" << format_double(fit.slope)
            << " intercept=" << format_double(fit.intercept) << " r=" << format_double(fit.pearson_r) << '\n';
        if (args.classes) {
            const BudgetAdvice advice = advise_budget(fit, *args.classes);
            out << "advice classes=" << *args.classes << " samples_per_class="
                << format_double(advice.samples_per_class) << " total_budget=" << advice.total_budget
                << (advice.extrapolated ? " extrapolated" : "") << '\n';
        }
    } else if (args.classes) {
        fail(ErrorCode::config_error, "advice needs at least two threshold points");
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Active learning with self-supervised pre-training on feature pools", "poolforge"};
    app.require_subcommand(1);

    const std::uint64_t default_seed = env_seed();

    GenDataArgs gen;
    gen.spec.seed = default_seed;
    auto* gen_cmd = app.add_subcommand("gen-data", "write synthetic train/test feature files");
    gen_cmd->add_option("--classes", gen.spec.num_classes, "number of classes")->capture_default_str();
    gen_cmd->add_option("--per-class", gen.spec.per_class, "samples per class")->capture_default_str();
    gen_cmd->add_option("--dim", gen.spec.dim, "informative dimensions")->capture_default_str();
    gen_cmd->add_option("--noise-dim", gen.spec.noise_dim, "pure-noise dimensions")->capture_default_str();
    gen_cmd->add_option("--sigma", gen.spec.sigma, "within-class standard deviation")->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "generator seed (default POOLFORGE_SEED)");
    gen_cmd->add_option("--out", gen.out, "output directory")->required();

    SelfTrainArgs self;
    self.siam.seed = default_seed;
    auto* self_cmd = app.add_subcommand("selftrain", "pre-train the siamese encoder and write a PSN1 net");
    self_cmd->add_option("--train", self.train, "train feature file")->required();
    self_cmd->add_option("--out", self.out, "net file to write")->required();
    self_cmd->add_option("--epochs", self.siam.epochs, "epochs")->check(CLI::PositiveNumber)->capture_default_str();
    self_cmd->add_option("--batch-size", self.siam.batch_size, "batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    self_cmd->add_option("--lr", self.siam.base_lr, "base learning rate")->capture_default_str();
    self_cmd->add_option("--momentum", self.siam.momentum, "momentum")->capture_default_str();
    self_cmd->add_option("--weight-decay", self.siam.weight_decay, "weight decay")->capture_default_str();
    self_cmd->add_option("--seed", self.siam.seed, "master seed (default POOLFORGE_SEED)");
    self_cmd->add_option("--encoder", self.encoder, "encoder widths after the input")->delimiter(',');
    self_cmd->add_option("--predictor-hidden", self.net.predictor_hidden, "predictor hidden width")
        ->capture_default_str();
    self_cmd->add_option("--noise-sigma", self.augment.noise_sigma, "augmentation noise")->capture_default_str();
    self_cmd->add_option("--scale-lo", self.augment.scale_lo, "augmentation scale lower bound")->capture_default_str();
    self_cmd->add_option("--scale-hi", self.augment.scale_hi, "augmentation scale upper bound")->capture_default_str();
    self_cmd->add_option("--drop-prob", self.augment.drop_prob, "coordinate dropout")->capture_default_str();

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "run a method x seed sweep and write results.csv");
    run_cmd->add_option("--config", run.config, "key = value config file with [section] headers");
    std::vector<std::pair<std::string, std::string>> flag_values(config_keys().size());
    for (std::size_t i = 0; i < config_keys().size(); ++i) {
        const auto& key = config_keys()[i];
        flag_values[i].first = std::string(key.name);
        run_cmd->add_option("--" + std::string(key.name), flag_values[i].second,
                            std::string(key.help) + " [" + std::string(key.default_value) + "]");
    }
    std::string jobs_flag;
    std::string out_flag;
    run_cmd->add_option("--jobs", jobs_flag, "alias for --sweep.jobs");
    run_cmd->add_option("--out", out_flag, "alias for --output.dir");

    AdviseArgs advise;
    auto* advise_cmd = app.add_subcommand("advise", "crossover budgets, threshold fit and budget advice");
    advise_cmd->add_option("--results", advise.results, "results.csv from `run` (repeatable)");
    advise_cmd->add_option("--results-classes", advise.results_classes,
                           "class count of each --results file, turning crossovers into fit points");
    advise_cmd->add_option("--point", advise.points, "explicit threshold point C:samples_per_class (repeatable)");
    advise_cmd->add_option("--mode", advise.mode, "mode whose crossovers feed the fit")->capture_default_str();
    advise_cmd->add_option("--fit-method", advise.fit_method, "method whose crossovers feed the fit")
        ->capture_default_str();
    advise_cmd->add_option("--classes", advise.classes, "class count to advise a budget for");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen_data(gen, out);
        if (self_cmd->parsed()) return cmd_selftrain(self, out);
        if (run_cmd->parsed()) {
            for (const auto& [key, value] : flag_values) {
                if (run_cmd->count("--" + key) > 0) run.overrides[key] = value;
            }
            if (!jobs_flag.empty()) run.overrides["sweep.jobs"] = jobs_flag;
            if (!out_flag.empty()) run.overrides["output.dir"] = out_flag;
            return cmd_run(run, out, err);
        }
        if (advise_cmd->parsed()) return cmd_advise(advise, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace poolforge::cli

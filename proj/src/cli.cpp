#include "stance/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

namespace stance::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Protocol p) noexcept {
    switch (p) {
        case Protocol::LooByEvent: return "loo_by_event";
        case Protocol::LooGlobal: return "loo_global";
        case Protocol::Split: return "split";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view s) noexcept {
    if (s == "loo_by_event" || s == "loo") return Protocol::LooByEvent;
    if (s == "loo_global") return Protocol::LooGlobal;
    if (s == "split") return Protocol::Split;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Config

namespace {

ordered_json opt_int(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

Timestamp parse_now(const std::string& s) {
    try {
        return parse_rfc3339(s);
    } catch (const Error& e) {
        throw ConfigError("invalid now '" + s + "': " + e.what());
    }
}

template <class T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return (path.is_absolute() || base.empty() ? path : base / path).lexically_normal();
}

void apply_classifier(ClassifierConfig& c, const json& j) {
    if (j.is_string()) {
        auto kind = parse_classifier(j.get<std::string>());
        if (!kind) throw ConfigError("unknown classifier '" + j.get<std::string>() + "'");
        c.kind = *kind;
        return;
    }
    if (!j.is_object()) throw ConfigError("config key 'classifier' must be a string or an object");
    for (const auto& [key, v] : j.items()) {
        const std::string k = "classifier." + key;
        if (key == "kind") {
            auto kind = parse_classifier(get_as<std::string>(v, k));
            if (!kind) throw ConfigError("unknown classifier '" + v.get<std::string>() + "'");
            c.kind = *kind;
        } else if (key == "pruning") {
            c.tree.pruning = get_as<bool>(v, k);
        } else if (key == "confidence") {
            c.tree.confidence = get_as<double>(v, k);
        } else if (key == "min_leaf") {
            c.tree.min_leaf = c.forest.min_leaf = get_as<int>(v, k);
        } else if (key == "max_depth") {
            const std::optional<int> d = v.is_null() ? std::nullopt : std::optional<int>(get_as<int>(v, k));
            c.tree.max_depth = c.forest.max_depth = d;
        } else if (key == "n_trees") {
            c.forest.n_trees = get_as<int>(v, k);
        } else if (key == "features_per_split") {
            auto s = parse_feature_subset(get_as<std::string>(v, k));
            if (!s) throw ConfigError("unknown features_per_split '" + v.get<std::string>() + "'");
            c.forest.features_per_split = *s;
        } else if (key == "bagging") {
            c.forest.bagging = get_as<bool>(v, k);
        } else if (key == "k") {
            c.knn.k = get_as<int>(v, k);
        } else if (key == "weighting") {
            auto w = parse_knn_weighting(get_as<std::string>(v, k));
            if (!w) throw ConfigError("unknown knn weighting '" + v.get<std::string>() + "'");
            c.knn.weighting = *w;
        } else {
            throw ConfigError("unknown config key '" + k + "'");
        }
    }
}

GroupSet parse_features(const json& j) {
    if (j.is_string()) return GroupSet::parse(j.get<std::string>());
    if (!j.is_array()) throw ConfigError("config key 'features' must be a string or a list");
    std::string spec;
    for (const auto& g : j) spec += get_as<std::string>(g, "features") + ",";
    return GroupSet::parse(spec);
}

}  // namespace

ordered_json ExperimentConfig::to_json(bool runtime) const {
    ordered_json j;
    ordered_json ds = ordered_json::array();
    for (const auto& d : datasets) ds.push_back(d.generic_string());
    j["dataset"] = ds;
    j["test_dataset"] = test_dataset ? ordered_json(test_dataset->generic_string()) : ordered_json(nullptr);
    j["resources"] = resources.generic_string();
    ordered_json c;
    c["kind"] = std::string(stance::to_string(classifier.kind));
    c["pruning"] = classifier.tree.pruning;
    c["confidence"] = classifier.tree.confidence;
    c["min_leaf"] = classifier.tree.min_leaf;
    c["max_depth"] = opt_int(classifier.tree.max_depth);
    c["n_trees"] = classifier.forest.n_trees;
    c["features_per_split"] = std::string(stance::to_string(classifier.forest.features_per_split));
    c["bagging"] = classifier.forest.bagging;
    c["k"] = classifier.knn.k;
    c["weighting"] = std::string(stance::to_string(classifier.knn.weighting));
    j["classifier"] = c;
    ordered_json groups = ordered_json::array();
    for (auto g : features.list()) groups.push_back(std::string(stance::to_string(g)));
    j["features"] = groups;
    j["protocol"] = std::string(cli::to_string(protocol));
    j["seed"] = seed;
    j["now"] = now ? ordered_json(format_rfc3339(*now)) : ordered_json("latest");
    j["ablate"] = ablate;
    if (runtime) {
        j["raw"] = raw ? ordered_json(raw->generic_string()) : ordered_json(nullptr);
        j["name"] = name;
        j["model"] = model ? ordered_json(model->generic_string()) : ordered_json(nullptr);
        j["input"] = input ? ordered_json(input->generic_string()) : ordered_json(nullptr);
        j["out"] = out.generic_string();
        j["jobs"] = jobs;
    }
    return j;
}

ExperimentConfig parse_config(const json& j, const fs::path& base) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "dataset") {
            if (v.is_string()) {
                c.datasets = {resolve(base, v.get<std::string>())};
            } else if (v.is_array()) {
                c.datasets.clear();
                for (const auto& p : v) c.datasets.push_back(resolve(base, get_as<std::string>(p, key)));
            } else {
                throw ConfigError("config key 'dataset' must be a path or a list of paths");
            }
        } else if (key == "test_dataset") {
            if (!v.is_null()) c.test_dataset = resolve(base, get_as<std::string>(v, key));
        } else if (key == "raw") {
            if (!v.is_null()) c.raw = resolve(base, get_as<std::string>(v, key));
        } else if (key == "name") {
            c.name = get_as<std::string>(v, key);
        } else if (key == "resources") {
            c.resources = resolve(base, get_as<std::string>(v, key));
        } else if (key == "classifier") {
            apply_classifier(c.classifier, v);
        } else if (key == "features") {
            c.features = parse_features(v);
        } else if (key == "protocol") {
            auto p = parse_protocol(get_as<std::string>(v, key));
            if (!p) throw ConfigError("unknown protocol '" + v.get<std::string>() + "'");
            c.protocol = *p;
        } else if (key == "seed") {
            c.seed = get_as<std::uint64_t>(v, key);
        } else if (key == "now") {
            const std::string s = v.is_null() ? "latest" : get_as<std::string>(v, key);
            if (s == "latest") {
                c.now.reset();
            } else {
                c.now = parse_now(s);
            }
        } else if (key == "out") {
            c.out = resolve(base, get_as<std::string>(v, key));
        } else if (key == "jobs") {
            c.jobs = get_as<unsigned>(v, key);
        } else if (key == "ablate") {
            c.ablate = get_as<std::vector<std::string>>(v, key);
        } else if (key == "model") {
            if (!v.is_null()) c.model = resolve(base, get_as<std::string>(v, key));
        } else if (key == "input") {
            if (!v.is_null()) c.input = resolve(base, get_as<std::string>(v, key));
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j, path.parent_path());
}

Dataset load_datasets(const std::vector<fs::path>& paths) {
    if (paths.empty()) throw ConfigError("no dataset given (use --dataset or the config key 'dataset')");
    std::vector<Dataset> parts;
    for (const auto& p : paths) {
        if (!fs::exists(p)) throw ConfigError("dataset not found: " + p.string());
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p)) {
                if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            if (files.empty()) throw ConfigError("dataset directory holds no .jsonl files: " + p.string());
            for (const auto& f : files) parts.push_back(load_dataset(f));
        } else {
            parts.push_back(load_dataset(p));
        }
    }
    if (parts.size() == 1) return std::move(parts.front());
    std::string name;
    for (const auto& d : parts) name += (name.empty() ? "" : "+") + d.name();
    return merge_datasets(parts, name);
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Flags {
    std::string config, seed, jobs, now, out, resources, classifier, protocol, features, groups, model, input, raw,
        name, test_dataset;
    std::vector<std::string> datasets;
};

ExperimentConfig resolve_config(const Flags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (!f.datasets.empty()) {
        c.datasets.clear();
        for (const auto& d : f.datasets) c.datasets.push_back(fs::path(d).lexically_normal());
    }
    if (!f.test_dataset.empty()) c.test_dataset = fs::path(f.test_dataset).lexically_normal();
    if (!f.raw.empty()) c.raw = fs::path(f.raw).lexically_normal();
    if (!f.name.empty()) c.name = f.name;
    if (!f.resources.empty()) c.resources = fs::path(f.resources).lexically_normal();
    if (!f.classifier.empty()) apply_classifier(c.classifier, json(f.classifier));
    if (!f.features.empty()) c.features = GroupSet::parse(f.features);
    if (!f.protocol.empty()) {
        auto p = parse_protocol(f.protocol);
        if (!p) throw ConfigError("unknown protocol '" + f.protocol + "'");
        c.protocol = *p;
    }
    if (!f.seed.empty()) {
        try {
            std::size_t used = 0;
            c.seed = std::stoull(f.seed, &used);
            if (used != f.seed.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("invalid seed '" + f.seed + "'");
        }
    }
    if (!f.now.empty()) c.now = f.now == "latest" ? std::nullopt : std::optional<Timestamp>(parse_now(f.now));
    if (!f.out.empty()) c.out = fs::path(f.out).lexically_normal();
    if (!f.jobs.empty()) {
        try {
            const int j = std::stoi(f.jobs);
            if (j < 1) throw std::invalid_argument("jobs");
            c.jobs = static_cast<unsigned>(j);
        } catch (const std::exception&) {
            throw ConfigError("invalid jobs '" + f.jobs + "'");
        }
    }
    if (!f.groups.empty()) {
        c.ablate.clear();
        std::string_view s = f.groups;
        while (!s.empty()) {
            const auto comma = s.find(',');
            const auto tag = s.substr(0, comma);
            if (!tag.empty()) c.ablate.emplace_back(tag);
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
    }
    if (!f.model.empty()) c.model = fs::path(f.model).lexically_normal();
    if (!f.input.empty()) c.input = fs::path(f.input).lexically_normal();
    c.classifier.tree.validate();
    c.classifier.forest.validate();
    c.classifier.knn.validate();
    if (c.features.empty()) throw ConfigError("no feature groups enabled");
    return c;
}

ResourceBundle open_bundle(const fs::path& dir) {
    if (dir.empty()) throw ConfigError("no resource bundle given (use --resources or the config key 'resources')");
    if (!fs::is_directory(dir)) throw ConfigError("resource bundle not found: " + dir.string());
    try {
        return load_bundle(dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("resource bundle ") + dir.string() + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
}

void prepare_out(const ExperimentConfig& c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw Error("cannot create output directory " + c.out.string() + ": " + ec.message());
    write_text(c.out / "config.json", c.to_json().dump(2) + "\n");
}

ordered_json experiment_context(const ExperimentConfig& c) {
    ordered_json j = c.to_json(false);
    j.erase("ablate");
    return j;
}

RunConfig run_config(const ExperimentConfig& c) {
    RunConfig r;
    r.classifier = c.classifier;
    r.groups = c.features;
    r.seed = c.seed;
    r.jobs = c.jobs;
    r.now = c.now;
    r.scope = c.protocol == Protocol::LooGlobal ? LooScope::Global : LooScope::ByEvent;
    r.context = experiment_context(c);
    return r;
}

struct Featurized {
    FeatureDictionaries dicts;
    FeatureSchema schema;
    Timestamp now = 0;
    std::vector<std::string> ids;
    std::vector<std::optional<StanceLabel>> labels;
    std::vector<FeatureVector> vectors;
};

Featurized featurize_all(const Dataset& d, const ResourceBundle& bundle, const ExperimentConfig& c) {
    Featurized f;
    f.now = c.now.value_or(d.latest_timestamp());
    f.dicts = build_dictionaries(d.tweets(), bundle);
    f.schema = FeatureSchema::build(f.dicts, bundle, c.features);
    for (const auto& th : build_threads(d)) {
        auto add = [&](const TweetRecord& t) {
            f.ids.push_back(t.tweet_id);
            f.labels.push_back(t.label);
            f.vectors.push_back(assemble(analyze(t, th, bundle, f.now), f.dicts, f.schema));
        };
        add(th.source);
        for (const auto& r : th.replies) add(r);
    }
    return f;
}

int cmd_ingest(const ExperimentConfig& c, std::ostream& out) {
    if (!c.raw) throw ConfigError("ingest needs a raw export directory (--raw or the config key 'raw')");
    if (!fs::is_directory(*c.raw)) throw ConfigError("raw export not found: " + c.raw->string());
    const std::string name = c.name.empty() ? c.raw->lexically_normal().filename().string() : c.name;
    IngestResult r = ingest_pheme(*c.raw, name.empty() ? "dataset" : name);
    std::error_code ec;
    fs::create_directories(c.out, ec);
    const fs::path target = c.out / (r.dataset.name() + ".jsonl");
    save_dataset(r.dataset, target);
    const auto counts = label_counts(r.dataset);
    out << "wrote " << target.generic_string() << ": " << r.dataset.size() << " tweets, "
        << r.dataset.rumour_index().size() << " rumours, S=" << counts[0] << " D=" << counts[1] << " Q=" << counts[2]
        << " C=" << counts[3] << ", " << r.dropped_labels << " unusable annotations\n";
    return 0;
}

int cmd_featurize(const ExperimentConfig& c, std::ostream& out) {
    const ResourceBundle bundle = open_bundle(c.resources);
    const Dataset d = load_datasets(c.datasets);
    prepare_out(c);
    const Featurized f = featurize_all(d, bundle, c);
    std::string rows = "tweet_id\tlabel\tfeatures\n";
    for (std::size_t i = 0; i < f.ids.size(); ++i) {
        rows += f.ids[i] + '\t' + (f.labels[i] ? std::string(to_string(*f.labels[i])) : "-") + '\t' +
                format_sparse(f.vectors[i]) + '\n';
    }
    write_text(c.out / "features.tsv", rows);
    write_text(c.out / "schema.tsv", f.schema.to_tsv());
    out << "wrote " << (c.out / "features.tsv").generic_string() << " (" << f.ids.size() << " tweets, "
        << f.schema.size() << " columns, schema " << to_hex(f.schema.fingerprint()) << ")\n";
    return 0;
}

int cmd_train(const ExperimentConfig& c, std::ostream& out) {
    const ResourceBundle bundle = open_bundle(c.resources);
    const Dataset d = load_datasets(c.datasets);
    prepare_out(c);
    const Featurized f = featurize_all(d, bundle, c);
    std::vector<FeatureVector> x;
    std::vector<StanceLabel> y;
    for (std::size_t i = 0; i < f.ids.size(); ++i) {
        if (!f.labels[i]) continue;
        x.push_back(f.vectors[i]);
        y.push_back(*f.labels[i]);
    }
    if (x.empty()) throw ValidationError("dataset has no labelled tweets to train on");
    TrainedModel model = fit_classifier(c.classifier, x, y, c.seed, c.jobs);
    ordered_json att;
    att["features"] = f.schema.groups().label();
    att["schema_tsv"] = f.schema.to_tsv();
    att["bow"] = f.dicts.bow_vocab();
    att["posng"] = f.dicts.posng_vocab();
    att["provenance"] = f.dicts.provenance();
    att["now"] = format_rfc3339(f.now);
    att["resources"] = fs::absolute(c.resources).lexically_normal().generic_string();
    att["resources_hash"] = to_hex(bundle.content_hash);
    att["classifier"] = c.classifier.to_json();
    model.attachments = json::parse(att.dump());
    const fs::path target = c.model.value_or(c.out / "model.json");
    save_model(model, target);
    out << "wrote " << target.generic_string() << " (" << stance::to_string(model.kind) << ", " << x.size()
        << " training tweets)\n";
    return 0;
}

void write_report(const ExperimentConfig& c, const std::string& stem, const ordered_json& j, const std::string& text,
                  std::ostream& out) {
    write_text(c.out / (stem + ".json"), j.dump(2) + "\n");
    write_text(c.out / (stem + ".txt"), text);
    out << text;
}

int cmd_eval(const ExperimentConfig& c, bool split, std::ostream& out) {
    const ResourceBundle bundle = open_bundle(c.resources);
    const Dataset d = load_datasets(c.datasets);
    std::optional<Dataset> test;
    if (split) {
        if (!c.test_dataset) throw ConfigError("eval-split needs --test-dataset or the config key 'test_dataset'");
        test = load_datasets({*c.test_dataset});
    }
    ExperimentConfig resolved = c;
    if (split) resolved.protocol = Protocol::Split;
    if (!split && resolved.protocol == Protocol::Split) resolved.protocol = Protocol::LooByEvent;
    prepare_out(resolved);
    const RunConfig rc = run_config(resolved);
    const EvalReport r = split ? run_split(d, *test, bundle, rc) : run_loo(d, bundle, rc);
    write_report(resolved, "report", to_json(r), render_text(r), out);
    return 0;
}

int cmd_ablate(const ExperimentConfig& c, std::ostream& out) {
    const ResourceBundle bundle = open_bundle(c.resources);
    const auto targets = parse_ablation_targets(c.ablate);
    const Dataset d = load_datasets(c.datasets);
    std::optional<Dataset> test;
    if (c.protocol == Protocol::Split) {
        if (!c.test_dataset) throw ConfigError("split ablation needs --test-dataset or the config key 'test_dataset'");
        test = load_datasets({*c.test_dataset});
    }
    prepare_out(c);
    const AblationReport r = ablate(d, test, bundle, run_config(c), targets);
    write_report(c, "ablation", to_json(r), render_text(r), out);
    return 0;
}

int cmd_predict(const ExperimentConfig& c, const Flags& flags, std::ostream& out) {
    if (!c.model) throw ConfigError("predict needs --model");
    if (!c.input) throw ConfigError("predict needs --input");
    if (!fs::exists(*c.model)) throw ConfigError("model not found: " + c.model->string());
    if (!fs::exists(*c.input)) throw ConfigError("input not found: " + c.input->string());
    const TrainedModel model = load_model(*c.model);
    const json& att = model.attachments;
    if (!att.is_object() || !att.contains("schema_tsv")) {
        throw ModelFormatError("model carries no featurizer state; train it with `stance train`");
    }
    fs::path res = c.resources;
    if (res.empty()) res = att.at("resources").get<std::string>();
    const ResourceBundle bundle = open_bundle(res);
    if (to_hex(bundle.content_hash) != att.at("resources_hash").get<std::string>()) {
        log::warn("resource bundle " + res.string() + " differs from the one the model was trained with");
    }
    const FeatureDictionaries dicts(att.at("bow").get<std::vector<std::string>>(),
                                    att.at("posng").get<std::vector<std::string>>(),
                                    att.at("provenance").get<std::vector<std::string>>());
    const FeatureSchema schema = FeatureSchema::from_tsv(att.at("schema_tsv").get<std::string>(), dicts.fingerprint());
    if (schema.fingerprint() != model.schema_fingerprint) {
        throw SchemaMismatch("model schema fingerprint does not match its stored schema");
    }
    const Timestamp now = flags.now.empty() ? parse_rfc3339(att.at("now").get<std::string>()) : c.now.value_or(0);
    const Dataset input = load_dataset(*c.input);

    std::unordered_map<std::string, std::string> lines;
    for (const auto& th : build_threads(input)) {
        auto emit = [&](const TweetRecord& t) {
            const Prediction p = predict(model, assemble(analyze(t, th, bundle, now), dicts, schema));
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f", p.scores[0], p.scores[1], p.scores[2], p.scores[3]);
            lines[t.tweet_id] = t.tweet_id + '\t' + std::string(to_string(p.label)) + '\t' + buf + '\n';
        };
        emit(th.source);
        for (const auto& r : th.replies) emit(r);
    }
    for (const auto& t : input.tweets()) out << lines.at(t.tweet_id);
    return 0;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON experiment config");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--jobs", f.jobs, "worker threads");
    sub->add_option("--now", f.now, "reference date (RFC 3339) or 'latest'");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--resources", f.resources, "resource bundle directory");
}

void add_data(CLI::App* sub, Flags& f) {
    sub->add_option("--dataset", f.datasets, "normalized JSONL dataset(s) or directories");
    sub->add_option("--features", f.features, "feature groups, e.g. all,-AF");
}

void add_learner(CLI::App* sub, Flags& f) {
    sub->add_option("--classifier", f.classifier, "tree, forest, knn or majority");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stance classification for rumour threads", "stance"};
    app.require_subcommand(1);
    Flags f;

    auto* ingest = app.add_subcommand("ingest", "convert a PHEME-layout export to normalized JSONL");
    add_common(ingest, f);
    ingest->add_option("--raw", f.raw, "export root directory");
    ingest->add_option("--name", f.name, "dataset name (default: directory name)");

    auto* featurize = app.add_subcommand("featurize", "write sparse feature vectors and the schema");
    add_common(featurize, f);
    add_data(featurize, f);

    auto* train = app.add_subcommand("train", "fit a classifier on a dataset");
    add_common(train, f);
    add_data(train, f);
    add_learner(train, f);
    train->add_option("--model", f.model, "model output path (default: <out>/model.json)");

    auto* loo = app.add_subcommand("eval-loo", "leave-one-rumour-out evaluation");
    add_common(loo, f);
    add_data(loo, f);
    add_learner(loo, f);
    loo->add_option("--protocol", f.protocol, "loo_by_event or loo_global");

    auto* split = app.add_subcommand("eval-split", "train on one dataset, test on another");
    add_common(split, f);
    add_data(split, f);
    add_learner(split, f);
    split->add_option("--test-dataset", f.test_dataset, "test dataset");

    auto* abl = app.add_subcommand("ablate", "remove feature groups in turn");
    add_common(abl, f);
    add_data(abl, f);
    add_learner(abl, f);
    abl->add_option("--protocol", f.protocol, "loo_by_event, loo_global or split");
    abl->add_option("--test-dataset", f.test_dataset, "test dataset for the split protocol");
    abl->add_option("--groups", f.groups, "comma-separated groups to remove; AF removes all six AF groups");

    auto* pred = app.add_subcommand("predict", "label tweets with a trained model");
    add_common(pred, f);
    pred->add_option("--model", f.model, "trained model");
    pred->add_option("--input", f.input, "JSONL tweets");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "stance: " << e.what() << "\n";
        return 2;
    }

    try {
        ExperimentConfig c = resolve_config(f);
        if (ingest->parsed()) return cmd_ingest(c, out);
        if (featurize->parsed()) return cmd_featurize(c, out);
        if (train->parsed()) return cmd_train(c, out);
        if (loo->parsed()) return cmd_eval(c, false, out);
        if (split->parsed()) return cmd_eval(c, true, out);
        if (abl->parsed()) return cmd_ablate(c, out);
        if (pred->parsed()) return cmd_predict(c, f, out);
        return 2;
    } catch (const ConfigError& e) {
        err << "stance: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "stance: error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace stance::cli

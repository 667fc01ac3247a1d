// Command-line surface for the differential-testing triage pipeline:
// run -> cluster -> label -> propagate -> triage -> eval -> report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "divtriage/clusterer.hpp"
#include "divtriage/corpus.hpp"
#include "divtriage/memory.hpp"
#include "divtriage/metrics.hpp"
#include "divtriage/oracle.hpp"
#include "divtriage/propagation.hpp"
#include "divtriage/runner.hpp"
#include "divtriage/specindex.hpp"
#include "divtriage/vectorizer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace divtriage;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<std::string, Label> label_map(const std::vector<Label>& labels) {
    std::map<std::string, Label> m;
    for (const auto& l : labels) m[l.finding_id] = l;
    return m;
}

int cmd_run(const std::string& engines_path, const std::string& snippets_dir,
            const std::string& out_path, bool keep_all, int parallelism) {
    auto engines = load_engine_configs(engines_path);
    std::vector<std::string> snippets, ids;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(snippets_dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        snippets.push_back(read_file(p.string()));
        ids.push_back(p.stem().string());
    }
    auto findings = run_corpus(engines, snippets, parallelism, keep_all, ids);
    save_corpus(findings, out_path);
    std::cout << "wrote " << findings.size() << " finding(s) to " << out_path << "\n";
    return kExitOk;
}

int cmd_cluster(const std::string& findings_path, const std::string& out_path, int k_max,
                std::uint64_t seed) {
    auto findings = load_corpus(findings_path);
    auto rows = build_cluster_rows(findings, k_max, seed);
    save_cluster_rows(rows, out_path);
    std::cout << "wrote " << rows.size() << " cluster(s) to " << out_path << "\n";
    return kExitOk;
}

int cmd_label(const std::string& clusters_path, const std::string& labels_path,
              const std::string& findings_path, const std::string& truth_path) {
    auto rows = labeling_worklist(load_cluster_rows(clusters_path));

    std::map<std::string, Finding> findings_by_id;
    if (!findings_path.empty())
        for (auto& f : load_corpus(findings_path)) findings_by_id[f.id] = std::move(f);

    std::map<std::string, Label> truth;
    if (!truth_path.empty()) truth = label_map(load_labels(truth_path));

    // Append-only with timestamps so the labeling session is auditable.
    std::ofstream out(labels_path, std::ios::binary | std::ios::app);
    if (!out) throw CorpusError("cannot open labels file for append: " + labels_path);

    const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();

    for (const auto& row : rows) {
        Label label;
        label.finding_id = row.medoid_id;
        if (!truth.empty()) {
            auto it = truth.find(row.medoid_id);
            if (it == truth.end())
                throw CorpusError("truth file has no label for medoid " + row.medoid_id);
            label = it->second;
        } else {
            std::cout << "cluster " << row.pattern_key << "/" << row.cluster_id << " ("
                      << row.finding_ids.size() << " findings), medoid " << row.medoid_id
                      << "\n";
            auto fit = findings_by_id.find(row.medoid_id);
            if (fit != findings_by_id.end()) std::cout << finding_document(fit->second);
            std::cout << "verdict (BUG/NO_BUG): " << std::flush;
            std::string verdict_str, root_cause;
            if (!std::getline(std::cin, verdict_str))
                throw CorpusError("stdin closed during labeling");
            label.verdict = verdict_from_string(verdict_str);
            if (label.verdict == LabelVerdict::Bug) {
                std::cout << "root cause (one token): " << std::flush;
                if (!std::getline(std::cin, root_cause) || root_cause.empty())
                    throw CorpusError("root cause required for BUG verdicts");
            }
            label.root_cause = root_cause;
        }
        json j{{"finding_id", label.finding_id},
               {"verdict", verdict_to_string(label.verdict)},
               {"root_cause", label.root_cause},
               {"labeled_at", now}};
        out << j.dump() << "\n";
    }
    std::cout << "labeled " << rows.size() << " medoid(s) into " << labels_path << "\n";
    return kExitOk;
}

int cmd_propagate(const std::string& clusters_path, const std::string& labels_path,
                  const std::string& out_path, const std::string& granularity_str,
                  const std::string& truth_path) {
    auto rows = load_cluster_rows(clusters_path);
    auto labels = label_map(load_labels(labels_path));
    PropagationResult result = propagate(rows, labels);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + out_path);
    for (const auto& [fid, label] : result.propagated) {
        json j{{"finding_id", fid},
               {"verdict", verdict_to_string(label.verdict)},
               {"root_cause", label.root_cause}};
        out << j.dump() << "\n";
    }
    std::cout << "propagated " << result.propagated.size() << " label(s) to " << out_path
              << "\n";

    if (!truth_path.empty()) {
        Granularity g =
            granularity_str == "binary" ? Granularity::Binary : Granularity::RootCause;
        double acc =
            propagation_accuracy(result.propagated, label_map(load_labels(truth_path)), g);
        std::cout << "propagation accuracy (" << granularity_str << "): " << round2(acc)
                  << "%\n";
    }
    return kExitOk;
}

struct OracleSetup {
    std::vector<EngineConfig> engines;
    std::optional<SpecIndex> spec;
    std::optional<IssueStore> issues;
    std::unique_ptr<ModelEndpoint> endpoint;
    OracleConfig config;
};

OracleSetup load_oracle_setup(const std::string& config_path) {
    json j = json::parse(read_file(config_path));
    OracleSetup setup;

    if (j.contains("engines")) setup.engines = load_engine_configs(j["engines"]);
    if (j.contains("spec_path"))
        setup.spec = SpecIndex::build_from_file(j["spec_path"].get<std::string>());
    setup.issues.emplace(j.value("issues_path", std::string{}));

    setup.config.step_limit = j.value("step_limit", 120);
    setup.config.sub_agent_step_limit = j.value("sub_agent_step_limit", 20);
    setup.config.input_price_per_1k = j.value("input_price_per_1k", 0.0);
    setup.config.output_price_per_1k = j.value("output_price_per_1k", 0.0);
    setup.config.confidence_threshold = j.value("confidence_threshold", 0.0);

    std::string backend = j.value("backend", std::string{"scripted"});
    if (backend == "scripted") {
        setup.endpoint = std::make_unique<ScriptedEndpoint>(
            ScriptedEndpoint::from_jsonl_file(j.at("fixture").get<std::string>()));
    } else if (backend == "http") {
        HttpEndpoint::Config hc;
        hc.base_url = j.at("endpoint_url").get<std::string>();
        hc.path = j.value("endpoint_path", hc.path);
        hc.model = j.value("model", std::string{});
        hc.api_key_env = j.value("api_key_env", hc.api_key_env);
        hc.temperature = j.value("temperature", hc.temperature);
        setup.endpoint = std::make_unique<HttpEndpoint>(std::move(hc));
    } else {
        throw CorpusError("unknown oracle backend: " + backend);
    }
    return setup;
}

const char* decision_name(Decision d) { return d == Decision::Report ? "REPORT" : "SKIP"; }

int cmd_triage(const std::string& findings_path, const std::string& config_path,
               const std::string& out_path, const std::string& mode,
               const std::string& transcripts_dir) {
    auto findings = load_corpus(findings_path);
    OracleSetup setup = load_oracle_setup(config_path);
    OracleDeps deps;
    deps.engines = &setup.engines;
    deps.spec = setup.spec ? &*setup.spec : nullptr;
    deps.issues = &*setup.issues;
    deps.endpoint = setup.endpoint.get();
    deps.config = setup.config;

    if (!transcripts_dir.empty()) fs::create_directories(transcripts_dir);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + out_path);
    for (const auto& f : findings) {
        auto [verdict, transcript] =
            mode == "sequential" ? triage_sequential(f, deps) : triage(f, deps);
        json j{{"finding_id", f.id},
               {"steps", transcript.steps.size()},
               {"input_tokens", transcript.input_tokens},
               {"output_tokens", transcript.output_tokens}};
        if (verdict) {
            j["decision"] = decision_name(verdict->decision);
            j["confidence"] = verdict->confidence;
            j["rationale"] = verdict->rationale;
        } else {
            j["decision"] = nullptr;
        }
        j["terminated_by"] = transcript.terminated_by == Termination::Decision ? "DECISION"
                             : transcript.terminated_by == Termination::StepLimit
                                 ? "STEP_LIMIT"
                                 : "ERROR";
        out << j.dump() << "\n";

        if (!transcripts_dir.empty()) {
            std::ofstream tout(transcripts_dir + "/" + f.id + ".json", std::ios::binary);
            tout << transcript_to_json(transcript).dump(2) << "\n";
        }
    }
    std::cout << "triaged " << findings.size() << " finding(s) to " << out_path << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& verdicts_path, const std::string& truth_path,
             const std::string& out_path) {
    auto truth = label_map(load_labels(truth_path));
    ConfusionCounts counts;
    std::ifstream in(verdicts_path);
    if (!in) throw CorpusError("cannot open verdicts file: " + verdicts_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j["decision"].is_null()) continue;  // errored triage carries no verdict
        std::string fid = j.at("finding_id").get<std::string>();
        auto it = truth.find(fid);
        if (it == truth.end())
            throw CorpusError("truth file has no label for finding " + fid);
        bool reported = j["decision"].get<std::string>() == "REPORT";
        bool is_bug = it->second.verdict == LabelVerdict::Bug;
        if (reported && is_bug) ++counts.true_positives;
        else if (reported && !is_bug) ++counts.false_positives;
        else if (!reported && is_bug) ++counts.false_negatives;
        else ++counts.true_negatives;
    }

    json report{{"counts",
                 {{"true_positives", counts.true_positives},
                  {"false_positives", counts.false_positives},
                  {"true_negatives", counts.true_negatives},
                  {"false_negatives", counts.false_negatives}}}};
    // Mixed or one-sided sets: a quadrant-empty metric is reported as null.
    try {
        double r = recall(counts);
        report["recall"] = r;
        report["recall_rounded"] = round2(r);
    } catch (const UndefinedMetric&) {
        report["recall"] = nullptr;
    }
    try {
        double f = false_positive_rate(counts);
        report["false_positive_rate"] = f;
        report["false_positive_rate_rounded"] = round2(f);
    } catch (const UndefinedMetric&) {
        report["false_positive_rate"] = nullptr;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + out_path);
    out << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_report(const std::string& transcripts_dir, double in_price, double out_price) {
    std::vector<Transcript> transcripts;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(transcripts_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files)
        transcripts.push_back(transcript_from_json(json::parse(read_file(p.string()))));
    if (transcripts.empty()) throw CorpusError("no transcripts in " + transcripts_dir);

    TelemetryReport t = telemetry_report(transcripts, in_price, out_price);
    std::cout.setf(std::ios::fixed);
    std::cout.precision(4);
    std::cout << "cases: " << transcripts.size() << "\n"
              << "median steps: " << t.median_steps << "\n"
              << "p95 steps: " << t.p95_steps << "\n"
              << "mean tokens/case: " << t.mean_tokens_per_case << "\n"
              << "mean time/case (ms): " << t.mean_time_ms_per_case << "\n"
              << "mean cost/case: " << t.mean_cost_per_case << "\n"
              << "actor calls:\n";
    for (const auto& [actor, n] : t.actor_calls)
        std::cout << "  " << actor << ": " << n << "\n";
    std::cout << "actor transitions:\n";
    for (const auto& [edge, n] : t.actor_transitions)
        std::cout << "  " << edge << ": " << n << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& findings_path, const std::string& truth_path, int k_max,
                std::uint64_t seed, const std::string& out_path) {
    auto findings = load_corpus(findings_path);
    auto truth = label_map(load_labels(truth_path));
    StrategyReport report = compare_strategies(findings, truth, k_max, seed);
    std::cout << render_strategy_report(report);
    if (!out_path.empty()) {
        json j{{"baseline_accuracy", report.baseline_accuracy},
               {"kmeans_accuracy", report.kmeans_accuracy},
               {"per_pattern", json::array()}};
        for (const auto& row : report.per_pattern)
            j["per_pattern"].push_back({{"pattern", row.pattern_key},
                                        {"size", row.size},
                                        {"baseline", row.baseline_accuracy},
                                        {"kmeans", row.kmeans_accuracy},
                                        {"optimal_k", row.optimal_k}});
        std::ofstream out(out_path, std::ios::binary);
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential-testing triage toolkit"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Execute snippets on every engine");
    std::string run_engines, run_snippets, run_out;
    bool run_keep_all = false;
    int run_parallelism = 1;
    run->add_option("--engines", run_engines)->required();
    run->add_option("--snippets", run_snippets)->required();
    run->add_option("--out", run_out)->required();
    run->add_flag("--keep-all", run_keep_all);
    run->add_option("--parallelism", run_parallelism)->check(CLI::PositiveNumber);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Exit-pattern grouping + K-means refinement");
    std::string cl_findings, cl_out;
    int cl_kmax = 0;
    std::uint64_t cl_seed = 42;
    cluster->add_option("--findings", cl_findings)->required();
    cluster->add_option("--out", cl_out)->required();
    cluster->add_option("--k-max", cl_kmax);
    cluster->add_option("--seed", cl_seed);

    // label
    auto* label = app.add_subcommand("label", "Label cluster medoids (interactive work-list)");
    std::string lb_clusters, lb_labels, lb_findings, lb_truth;
    label->add_option("--clusters", lb_clusters)->required();
    label->add_option("--labels", lb_labels)->required();
    label->add_option("--findings", lb_findings);
    label->add_option("--truth", lb_truth)
        ->description("oracle-lookup mode: take medoid labels from this file");

    // propagate
    auto* propagate = app.add_subcommand("propagate", "Propagate medoid labels to clusters");
    std::string pg_clusters, pg_labels, pg_out, pg_gran = "root-cause", pg_truth;
    propagate->add_option("--clusters", pg_clusters)->required();
    propagate->add_option("--labels", pg_labels)->required();
    propagate->add_option("--out", pg_out)->required();
    propagate->add_option("--granularity", pg_gran)
        ->check(CLI::IsMember({"binary", "root-cause"}));
    propagate->add_option("--truth", pg_truth);

    // triage
    auto* triage_cmd = app.add_subcommand("triage", "Run the oracle over findings");
    std::string tr_findings, tr_config, tr_out, tr_mode = "agentic", tr_transcripts;
    triage_cmd->add_option("--findings", tr_findings)->required();
    triage_cmd->add_option("--config", tr_config)->required();
    triage_cmd->add_option("--out", tr_out)->required();
    triage_cmd->add_option("--mode", tr_mode)->check(CLI::IsMember({"agentic", "sequential"}));
    triage_cmd->add_option("--transcripts", tr_transcripts);

    // eval
    auto* eval = app.add_subcommand("eval", "Recall / FPR against ground truth");
    std::string ev_verdicts, ev_truth, ev_out;
    eval->add_option("--verdicts", ev_verdicts)->required();
    eval->add_option("--truth", ev_truth)->required();
    eval->add_option("--out", ev_out)->required();

    // report
    auto* report = app.add_subcommand("report", "Telemetry over stored transcripts");
    std::string rp_transcripts;
    double rp_in_price = 0.0, rp_out_price = 0.0;
    report->add_option("--transcripts", rp_transcripts)->required();
    report->add_option("--input-price", rp_in_price);
    report->add_option("--output-price", rp_out_price);

    // compare
    auto* compare = app.add_subcommand("compare", "Baseline vs K-means propagation accuracy");
    std::string cp_findings, cp_truth, cp_out;
    int cp_kmax = 0;
    std::uint64_t cp_seed = 42;
    compare->add_option("--findings", cp_findings)->required();
    compare->add_option("--truth", cp_truth)->required();
    compare->add_option("--k-max", cp_kmax);
    compare->add_option("--seed", cp_seed);
    compare->add_option("--out", cp_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed())
            return cmd_run(run_engines, run_snippets, run_out, run_keep_all, run_parallelism);
        if (cluster->parsed()) return cmd_cluster(cl_findings, cl_out, cl_kmax, cl_seed);
        if (label->parsed()) return cmd_label(lb_clusters, lb_labels, lb_findings, lb_truth);
        if (propagate->parsed())
            return cmd_propagate(pg_clusters, pg_labels, pg_out, pg_gran, pg_truth);
        if (triage_cmd->parsed())
            return cmd_triage(tr_findings, tr_config, tr_out, tr_mode, tr_transcripts);
        if (eval->parsed()) return cmd_eval(ev_verdicts, ev_truth, ev_out);
        if (report->parsed()) return cmd_report(rp_transcripts, rp_in_price, rp_out_price);
        if (compare->parsed())
            return cmd_compare(cp_findings, cp_truth, cp_kmax, cp_seed, cp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "analytics.hpp"
#include "config.hpp"
#include "converter.hpp"
#include "datetime.hpp"
#include "discovery.hpp"
#include "fetcher.hpp"
#include "http.hpp"
#include "iso639.hpp"
#include "logging.hpp"

namespace fs = std::filesystem;
using namespace feedpipe;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

/// Unrecoverable input problem; maps to the usage/config exit code.
struct FatalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw FatalError("cannot read: " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (!f)
        throw FatalError("cannot write: " + path.string());
}

fs::path summary_dir_of(const fs::path& output_path) {
    fs::path parent = output_path.parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

struct Timing {
    std::string started = format_iso8601(utc_now());
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void stamp(Json& summary) const {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0);
        summary["started"] = started;
        summary["finished"] = format_iso8601(utc_now());
        summary["duration_ms"] = elapsed.count();
    }
};

struct StageResult {
    int exit_code = 0;
    Json summary;
};

/// Shared flags; values land on top of the config file, which lands on top
/// of the defaults.
struct SharedOpts {
    std::string config_path;
    int timeout_secs = 0;
    std::string user_agent;
    int max_concurrency = 0;
    std::uint64_t seed = 0;

    CLI::Option* config_opt = nullptr;
    CLI::Option* timeout_opt = nullptr;
    CLI::Option* ua_opt = nullptr;
    CLI::Option* conc_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void attach_config(CLI::App* cmd) {
        config_opt = cmd->add_option("--config", config_path, "Config file (key=value lines)");
    }
    void attach_http(CLI::App* cmd) {
        timeout_opt = cmd->add_option("--timeout-secs", timeout_secs, "HTTP timeout in seconds");
        ua_opt = cmd->add_option("--user-agent", user_agent, "User-Agent header value");
    }
    void attach_fetch(CLI::App* cmd) {
        conc_opt = cmd->add_option("--max-concurrency", max_concurrency,
                                   "Worker threads (one in-flight request per host regardless)");
        seed_opt = cmd->add_option("--seed", seed, "Shuffle seed");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (config_opt && config_opt->count())
            cfg = load_config_file(config_path);
        if (timeout_opt && timeout_opt->count())
            cfg.timeout_secs = timeout_secs;
        if (ua_opt && ua_opt->count())
            cfg.user_agent = user_agent;
        if (conc_opt && conc_opt->count())
            cfg.max_concurrency = max_concurrency;
        if (seed_opt && seed_opt->count())
            cfg.seed = seed;
        validate_config(cfg);
        return cfg;
    }
};

RetryPolicy retry_policy_of(const PipelineConfig& cfg) {
    RetryPolicy policy;
    policy.waits = {std::chrono::milliseconds(cfg.retry_wait_1_ms),
                    std::chrono::milliseconds(cfg.retry_wait_2_ms)};
    return policy;
}

// ---------------------------------------------------------------- discover

StageResult cmd_discover(const PipelineConfig& cfg, const std::string& input_path,
                         const std::string& manual_path, const fs::path& output_path) {
    log_info("discover_start", {{"input", input_path}});
    UrlList list = load_url_list(read_text_file(input_path));
    for (const RejectedRow& r : list.rejected)
        log_warn("url_rejected", {{"row", std::to_string(r.row)}, {"text", r.text}});

    std::vector<SourceUrl> deduped = normalize_and_dedupe(list.sources);
    std::vector<ManualAddition> manual;
    if (!manual_path.empty())
        manual = load_manual_additions(read_text_file(manual_path));

    auto client = make_httplib_client({cfg.timeout_secs, cfg.user_agent});
    DiscoveryOptions options;
    options.workers = cfg.max_concurrency;
    DiscoveryRunResult run = run_discovery(deduped, *client, manual, options);
    for (const std::string& w : run.warnings)
        log_warn("manual_addition", {{"detail", w}});

    write_text_file(output_path, discovery_records_to_json(run.records));

    std::size_t dead = 0, feeds_found = 0;
    Json errors = Json::array();
    for (const DiscoveryRecord& rec : run.records) {
        feeds_found += rec.rss_links.size();
        bool alive = rec.status && *rec.status >= 200 && *rec.status <= 399;
        if (!alive) {
            ++dead;
            Json err;
            err["url"] = rec.url;
            err["status"] = rec.status ? Json(*rec.status) : Json(nullptr);
            errors.push_back(std::move(err));
        }
    }
    for (const RejectedRow& r : list.rejected) {
        Json err;
        err["row"] = r.row;
        err["text"] = r.text;
        errors.push_back(std::move(err));
    }

    StageResult result;
    result.summary["command"] = "discover";
    Json counts;
    counts["input_urls"] = list.sources.size();
    counts["rejected_rows"] = list.rejected.size();
    counts["unique_urls"] = deduped.size();
    counts["dead_urls"] = dead;
    counts["feeds_found"] = feeds_found;
    result.summary["counts"] = std::move(counts);
    result.summary["errors"] = std::move(errors);
    result.summary["warnings"] = run.warnings;

    std::size_t issues = list.rejected.size() + run.warnings.size() + dead;
    result.exit_code = issues > 0 ? 1 : 0;
    log_info("discover_done", {{"records", std::to_string(run.records.size())},
                               {"feeds_found", std::to_string(feeds_found)}});
    return result;
}

// ------------------------------------------------------------------- fetch

StageResult cmd_fetch(const PipelineConfig& cfg, const std::string& input_path,
                      const fs::path& out_dir) {
    log_info("fetch_start", {{"input", input_path}, {"out", out_dir.string()}});
    std::string discovery_json = read_text_file(input_path);

    auto client = make_httplib_client({cfg.timeout_secs, cfg.user_agent});
    RealSleeper sleeper;
    FetchOptions options;
    options.seed = cfg.seed;
    options.max_concurrency = cfg.max_concurrency;
    options.retry = retry_policy_of(cfg);

    FetchRunResult run;
    try {
        run = run_fetch(discovery_json, out_dir, *client, sleeper, options);
    } catch (const std::runtime_error& e) {
        throw FatalError(e.what());
    }
    for (const auto& [url, reason] : run.error_urls)
        log_warn("fetch_error", {{"url", url}, {"reason", reason}});

    StageResult result;
    result.summary["command"] = "fetch";
    Json counts;
    counts["downloaded"] = run.downloaded;
    counts["errors"] = run.errors;
    result.summary["counts"] = std::move(counts);
    Json errors = Json::array();
    for (const auto& [url, reason] : run.error_urls) {
        Json err;
        err["url"] = url;
        err["reason"] = reason;
        errors.push_back(std::move(err));
    }
    result.summary["errors"] = std::move(errors);
    result.summary["warnings"] = Json::array();
    result.exit_code = run.errors > 0 ? 1 : 0;
    log_info("fetch_done", {{"downloaded", std::to_string(run.downloaded)},
                            {"errors", std::to_string(run.errors)}});
    return result;
}

// ----------------------------------------------------------------- convert

StageResult cmd_convert(const fs::path& snapshots_dir, const fs::path& out_path,
                        fs::path comments_out, fs::path parsed_out) {
    log_info("convert_start", {{"snapshots", snapshots_dir.string()}});
    if (comments_out.empty())
        comments_out = summary_dir_of(out_path) / "comments.json";
    if (parsed_out.empty())
        parsed_out = summary_dir_of(out_path) / "parsed.json";

    DumpResult dump;
    try {
        dump = parse_rss_dump(snapshots_dir);
    } catch (const std::runtime_error& e) {
        throw FatalError(e.what());
    }
    for (const auto& [name, reason] : dump.skipped)
        log_warn("snapshot_skipped", {{"file", name}, {"reason", reason}});

    SplitResult split = split_comments(dump.corpus);
    ConversionOutput conv = convert_corpus(split);

    write_text_file(out_path, records_to_json(conv.records));
    write_text_file(comments_out, records_to_json(conv.comments));
    write_text_file(parsed_out, parsed_corpus_to_json(dump.corpus));

    StageResult result;
    result.summary["command"] = "convert";
    Json counts;
    counts["snapshots_parsed"] = dump.corpus.size();
    counts["snapshots_skipped"] = dump.skipped.size();
    counts["blog_feeds"] = split.blog.size();
    counts["comment_feeds"] = split.comments.size();
    counts["comment_entries_moved"] = split.comment_entries_from_blog.size();
    counts["records"] = conv.records.size();
    counts["comment_records"] = conv.comments.size();
    result.summary["counts"] = std::move(counts);
    Json errors = Json::array();
    for (const auto& [name, reason] : dump.skipped) {
        Json err;
        err["file"] = name;
        err["reason"] = reason;
        errors.push_back(std::move(err));
    }
    result.summary["errors"] = std::move(errors);
    result.summary["warnings"] = Json::array();
    result.exit_code = dump.skipped.empty() ? 0 : 1;
    log_info("convert_done", {{"records", std::to_string(conv.records.size())},
                              {"comment_records", std::to_string(conv.comments.size())}});
    return result;
}

// ----------------------------------------------------------------- analyze

std::vector<ParsedFeed> load_parsed_corpus(const std::string& records_path) {
    std::string text = read_text_file(records_path);
    try {
        return parsed_corpus_from_json(text);
    } catch (const std::runtime_error& e) {
        throw FatalError(std::string(e.what()) +
                         " (inclusion/quality read the parsed corpus JSON written by convert)");
    }
}

StageResult cmd_analyze_inclusion(const std::string& records_path, const fs::path& out_path) {
    std::vector<ParsedFeed> corpus = load_parsed_corpus(records_path);
    InclusionReport feed_report = inclusion_rates(corpus, InclusionLevel::feed);
    InclusionReport entry_report = inclusion_rates(corpus, InclusionLevel::entry);

    Json combined;
    combined["feed"] = Json::parse(inclusion_report_to_json(feed_report));
    combined["entry"] = Json::parse(inclusion_report_to_json(entry_report));
    write_text_file(out_path, combined.dump(2) + "\n");

    StageResult result;
    result.summary["command"] = "analyze inclusion";
    Json counts;
    counts["feeds"] = feed_report.denominator;
    counts["entries"] = entry_report.denominator;
    result.summary["counts"] = std::move(counts);
    result.summary["errors"] = Json::array();
    result.summary["warnings"] = Json::array();
    return result;
}

StageResult cmd_analyze_quality(const PipelineConfig& cfg, const std::string& records_path,
                                const fs::path& out_path) {
    std::vector<ParsedFeed> corpus = load_parsed_corpus(records_path);
    QualityThresholds thresholds{cfg.subtitle_max_chars, cfg.title_max_chars};
    std::vector<QualityFlag> flags = quality_flags(corpus, thresholds);
    write_text_file(out_path, quality_flags_to_json(flags));

    StageResult result;
    result.summary["command"] = "analyze quality";
    Json counts;
    counts["feeds"] = corpus.size();
    counts["flags"] = flags.size();
    result.summary["counts"] = std::move(counts);
    result.summary["errors"] = Json::array();
    result.summary["warnings"] = Json::array();
    return result;
}

StageResult cmd_analyze_timeline(const std::string& records_path,
                                 const std::vector<std::string>& keys, const fs::path& out_path) {
    std::string text = read_text_file(records_path);
    std::vector<NormalizedRecord> records;
    try {
        records = records_from_json(text);
    } catch (const std::runtime_error& e) {
        throw FatalError(e.what());
    }
    TimelineReport report = tags_over_time(records, keys);
    write_text_file(out_path, timeline_to_csv(report));

    StageResult result;
    result.summary["command"] = "analyze timeline";
    Json counts;
    counts["dated_entries"] = report.dated;
    counts["dateless_entries"] = report.dateless;
    counts["rows"] = report.rows.size();
    result.summary["counts"] = std::move(counts);
    result.summary["errors"] = Json::array();
    result.summary["warnings"] = Json::array();
    return result;
}

// ---------------------------------------------------------------- pipeline

StageResult cmd_pipeline(const PipelineConfig& cfg, const std::string& input_path,
                         const std::string& manual_path, const std::vector<std::string>& keys,
                         const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw FatalError("output directory unusable: " + out_dir.string());

    StageResult result;
    result.summary["command"] = "pipeline";
    Json stages;

    StageResult discover = cmd_discover(cfg, input_path, manual_path, out_dir / "discovery.json");
    stages["discover"] = discover.summary;

    StageResult fetch =
        cmd_fetch(cfg, (out_dir / "discovery.json").string(), out_dir / "snapshots");
    stages["fetch"] = fetch.summary;

    StageResult convert = cmd_convert(out_dir / "snapshots", out_dir / "records.json",
                                      out_dir / "comments.json", out_dir / "parsed.json");
    stages["convert"] = convert.summary;

    StageResult inclusion = cmd_analyze_inclusion((out_dir / "parsed.json").string(),
                                                  out_dir / "inclusion_report.json");
    stages["analyze_inclusion"] = inclusion.summary;

    StageResult quality = cmd_analyze_quality(cfg, (out_dir / "parsed.json").string(),
                                              out_dir / "quality_flags.json");
    stages["analyze_quality"] = quality.summary;

    StageResult timeline = cmd_analyze_timeline((out_dir / "records.json").string(), keys,
                                                out_dir / "topics_over_time.csv");
    stages["analyze_timeline"] = timeline.summary;

    result.summary["stages"] = std::move(stages);
    for (int code : {discover.exit_code, fetch.exit_code, convert.exit_code, inclusion.exit_code,
                     quality.exit_code, timeline.exit_code})
        result.exit_code = std::max(result.exit_code, code);
    return result;
}

int run_stage(const fs::path& summary_dir, const std::function<StageResult()>& stage) {
    Timing timing;
    StageResult result = stage();
    timing.stamp(result.summary);
    result.summary["exit_code"] = result.exit_code;
    write_text_file(summary_dir / "run_summary.json", result.summary.dump(2) + "\n");
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedpipe: discover, fetch, normalize and profile RSS/Atom feeds"};
    app.require_subcommand(1);
    std::string version = std::string("feedpipe ") + kVersion + "\n" + kLanguageTableVersion + "\n" +
                          kRecordIdSchemeVersion;
    app.set_version_flag("--version", version);

    // discover
    auto* discover = app.add_subcommand("discover", "Find feed URLs advertised by a list of pages");
    std::string discover_input, discover_manual, discover_output;
    discover->add_option("--input", discover_input, "CSV of candidate URLs (first column)")
        ->required();
    discover->add_option("--manual", discover_manual, "CSV of manual (source_url, feed_url) pairs");
    discover->add_option("--output", discover_output, "Discovery JSON path")->required();
    SharedOpts discover_opts;
    discover_opts.attach_config(discover);
    discover_opts.attach_http(discover);
    discover_opts.attach_fetch(discover);

    // fetch
    auto* fetch = app.add_subcommand("fetch", "Download every discovered feed into a snapshot dir");
    std::string fetch_input, fetch_out;
    fetch->add_option("--input", fetch_input, "Discovery JSON")->required();
    fetch->add_option("--out", fetch_out, "Snapshot directory")->required();
    SharedOpts fetch_opts;
    fetch_opts.attach_config(fetch);
    fetch_opts.attach_http(fetch);
    fetch_opts.attach_fetch(fetch);

    // convert
    auto* convert = app.add_subcommand("convert", "Normalize snapshots into bibliographic records");
    std::string convert_snapshots, convert_out, convert_comments, convert_parsed;
    convert->add_option("--snapshots", convert_snapshots, "Snapshot directory")->required();
    convert->add_option("--out", convert_out, "records.json path")->required();
    convert->add_option("--comments-out", convert_comments,
                        "comments.json path (default: next to --out)");
    convert->add_option("--parsed-out", convert_parsed,
                        "parsed corpus JSON path (default: next to --out)");
    SharedOpts convert_opts;
    convert_opts.attach_config(convert);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Inclusion rates, quality flags, timelines");
    analyze->require_subcommand(1);
    std::string analyze_records, analyze_out;
    std::vector<std::string> analyze_keys;
    auto* inclusion = analyze->add_subcommand("inclusion", "Per-field inclusion percentages");
    auto* quality = analyze->add_subcommand("quality", "Quality flags per record");
    auto* timeline = analyze->add_subcommand("timeline", "Two-month bucket counts per key");
    SharedOpts analyze_opts;
    for (CLI::App* sub : {inclusion, quality, timeline}) {
        sub->add_option("--records", analyze_records, "Input JSON")->required();
        sub->add_option("--out", analyze_out, "Output path")->required();
    }
    timeline->add_option("--keys", analyze_keys, "Comma-separated substring keys")
        ->delimiter(',');
    analyze_opts.attach_config(inclusion);
    SharedOpts quality_opts;
    quality_opts.attach_config(quality);
    SharedOpts timeline_opts;
    timeline_opts.attach_config(timeline);

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "discover + fetch + convert + analyze");
    std::string pipeline_input, pipeline_manual, pipeline_out;
    std::vector<std::string> pipeline_keys;
    pipeline->add_option("--input", pipeline_input, "CSV of candidate URLs")->required();
    pipeline->add_option("--manual", pipeline_manual, "Manual additions CSV");
    pipeline->add_option("--out", pipeline_out, "Output directory")->required();
    pipeline->add_option("--keys", pipeline_keys, "Timeline keys")->delimiter(',');
    SharedOpts pipeline_opts;
    pipeline_opts.attach_config(pipeline);
    pipeline_opts.attach_http(pipeline);
    pipeline_opts.attach_fetch(pipeline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (discover->parsed()) {
            PipelineConfig cfg = discover_opts.resolve();
            return run_stage(summary_dir_of(discover_output), [&] {
                return cmd_discover(cfg, discover_input, discover_manual, discover_output);
            });
        }
        if (fetch->parsed()) {
            PipelineConfig cfg = fetch_opts.resolve();
            return run_stage(fetch_out,
                             [&] { return cmd_fetch(cfg, fetch_input, fetch_out); });
        }
        if (convert->parsed()) {
            convert_opts.resolve();
            return run_stage(summary_dir_of(convert_out), [&] {
                return cmd_convert(convert_snapshots, convert_out, convert_comments,
                                   convert_parsed);
            });
        }
        if (analyze->parsed()) {
            if (inclusion->parsed()) {
                analyze_opts.resolve();
                return run_stage(summary_dir_of(analyze_out), [&] {
                    return cmd_analyze_inclusion(analyze_records, analyze_out);
                });
            }
            if (quality->parsed()) {
                PipelineConfig cfg = quality_opts.resolve();
                return run_stage(summary_dir_of(analyze_out), [&] {
                    return cmd_analyze_quality(cfg, analyze_records, analyze_out);
                });
            }
            PipelineConfig cfg = timeline_opts.resolve();
            (void)cfg;
            return run_stage(summary_dir_of(analyze_out), [&] {
                return cmd_analyze_timeline(analyze_records, analyze_keys, analyze_out);
            });
        }
        PipelineConfig cfg = pipeline_opts.resolve();
        return run_stage(pipeline_out, [&] {
            return cmd_pipeline(cfg, pipeline_input, pipeline_manual, pipeline_keys, pipeline_out);
        });
    } catch (const ConfigError& e) {
        log_error("config_error", {{"detail", e.what()}});
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const FatalError& e) {
        log_error("fatal", {{"detail", e.what()}});
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        log_error("unexpected", {{"detail", e.what()}});
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

// paramine: unsupervised bitext mining pipeline.
//
// Stages run individually (induce-dict, ingest, align-docs, align-sents,
// filter-rules, train-filter, classify, report) or end to end (run). Every
// stage works off the persisted artifacts in the configured output
// directory, so staged and single-shot execution produce the same bytes.
//
// Exit codes: 0 success, 1 validation error, 2 stage failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paramine/httplib_client.hpp"
#include "paramine/paramine.hpp"

namespace fs = std::filesystem;
using namespace paramine;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("-c,--config", opts.config_path, "pipeline config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory (overrides [output] dir)");
  cmd->add_option("--seed", opts.seed, "global seed (overrides [run] seed)");
  cmd->add_option("--workers", opts.workers, "worker threads (overrides [run] workers)");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
  PipelineConfig cfg = load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.workers > 0) cfg.workers = opts.workers;
  return cfg;
}

int run_stage(const char* name, const PipelineConfig& cfg, const std::function<void()>& stage) {
  try {
    cfg.validate_ranges();
    fs::create_directories(cfg.out_dir);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    stage();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: stage " << name << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paramine - unsupervised parallel corpus mining pipeline"};
  app.require_subcommand(1);

  // run
  CommonOpts run_opts;
  auto* cmd_run = app.add_subcommand("run", "run every stage in order");
  add_common(cmd_run, run_opts);

  // induce-dict
  CommonOpts dict_opts;
  auto* cmd_dict = app.add_subcommand("induce-dict", "train translation tables from the pseudo corpus");
  add_common(cmd_dict, dict_opts);

  // ingest
  CommonOpts ingest_opts;
  std::string ingest_domains, ingest_snapshot;
  int ingest_max_pages = 0, ingest_max_depth = -1, ingest_delay = -1;
  auto* cmd_ingest = app.add_subcommand("ingest", "acquire documents via crawl or snapshot");
  add_common(cmd_ingest, ingest_opts);
  cmd_ingest->add_option("--domains", ingest_domains, "domain list file, one hostname per line");
  cmd_ingest->add_option("--snapshot", ingest_snapshot, "snapshot directory or manifest file");
  cmd_ingest->add_option("--max-pages", ingest_max_pages, "page cap per domain");
  cmd_ingest->add_option("--max-depth", ingest_max_depth, "link depth cap");
  cmd_ingest->add_option("--delay-ms", ingest_delay, "politeness delay between requests");

  // align-docs
  CommonOpts adoc_opts;
  std::string adoc_weights;
  double adoc_threshold = -1.0;
  auto* cmd_adoc = app.add_subcommand("align-docs", "pair documents across languages");
  add_common(cmd_adoc, adoc_opts);
  cmd_adoc->add_option("--weights", adoc_weights, "url,structure,content weights (e.g. 0.5,0.25,0.25)");
  cmd_adoc->add_option("--doc-threshold", adoc_threshold, "minimum total score for a pair");

  // align-sents
  CommonOpts asent_opts;
  std::string asent_dict;
  double asent_dw = -1, asent_lw = -1, asent_gap = 1, asent_accept = -1e9;
  auto* cmd_asent = app.add_subcommand("align-sents", "align sentences inside document pairs");
  add_common(cmd_asent, asent_opts);
  cmd_asent->add_option("--dict", asent_dict, "seed dictionary file (default: induced forward dict)");
  cmd_asent->add_option("--dict-weight", asent_dw, "dictionary coverage weight");
  cmd_asent->add_option("--length-weight", asent_lw, "length correspondence weight");
  cmd_asent->add_option("--gap-penalty", asent_gap, "score of 1-0/0-1 beads (<= 0)");
  cmd_asent->add_option("--accept-threshold", asent_accept, "minimum bead score to emit a pair");

  // filter-rules
  CommonOpts rules_opts;
  auto* cmd_rules = app.add_subcommand("filter-rules", "apply the heuristic filter rules");
  add_common(cmd_rules, rules_opts);

  // train-filter
  CommonOpts train_opts;
  double train_ratio = -1;
  int train_trees = 0, train_depth = 0, train_subsample = 0;
  auto* cmd_train = app.add_subcommand("train-filter", "train the random-forest classifier");
  add_common(cmd_train, train_opts);
  cmd_train->add_option("--neg-ratio", train_ratio, "negatives per positive");
  cmd_train->add_option("--trees", train_trees, "number of trees");
  cmd_train->add_option("--max-depth", train_depth, "tree depth cap");
  cmd_train->add_option("--feat-subsample", train_subsample, "features sampled per node");

  // classify
  CommonOpts cls_opts;
  double cls_threshold = -1;
  auto* cmd_cls = app.add_subcommand("classify", "split B into C and B-C with the classifier");
  add_common(cmd_cls, cls_opts);
  cmd_cls->add_option("--cls-threshold", cls_threshold, "keep pairs scoring at least this");

  // report
  CommonOpts report_opts;
  auto* cmd_report = app.add_subcommand("report", "recount artifacts and write the report");
  add_common(cmd_report, report_opts);

  // gen-fixture
  SyntheticFixtureSpec fixture_spec;
  std::string fixture_out;
  auto* cmd_fixture = app.add_subcommand("gen-fixture", "generate a synthetic bilingual website fixture");
  cmd_fixture->add_option("--out", fixture_out, "fixture output directory")->required();
  cmd_fixture->add_option("--sites", fixture_spec.sites, "number of sites");
  cmd_fixture->add_option("--pages", fixture_spec.pages_per_site, "page pairs per site");
  cmd_fixture->add_option("--sentences", fixture_spec.sentences_per_page, "sentences per page");
  cmd_fixture->add_option("--vocab", fixture_spec.vocab_size, "cipher vocabulary size");
  cmd_fixture->add_option("--unpaired", fixture_spec.unpaired_fraction, "fraction of unpaired pages");
  cmd_fixture->add_option("--untranslated", fixture_spec.untranslated_fraction,
                          "fraction of inserted untranslated sentences");
  cmd_fixture->add_option("--near-dup", fixture_spec.near_duplicate_fraction,
                          "fraction of near-duplicate page pairs");
  cmd_fixture->add_option("--pseudo-noise", fixture_spec.pseudo_noise,
                          "token substitution rate in the pseudo corpus");
  cmd_fixture->add_option("--seed", fixture_spec.seed, "fixture seed");

  // evaluate
  std::string eval_mined, eval_truth, eval_json;
  auto* cmd_eval = app.add_subcommand("evaluate", "score a mined corpus against a truth pair list");
  cmd_eval->add_option("--mined", eval_mined, "mined corpus TSV")->required();
  cmd_eval->add_option("--truth", eval_truth, "ground-truth corpus TSV")->required();
  cmd_eval->add_option("--json", eval_json, "also write the result as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_run->parsed()) {
      PipelineConfig cfg = resolve_config(run_opts);
      HttplibClient client;
      try {
        PipelineReport report = run_pipeline(cfg, &client);
        std::cout << report.to_text();
      } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return 0;
    }
    if (cmd_dict->parsed()) {
      PipelineConfig cfg = resolve_config(dict_opts);
      return run_stage("induce-dict", cfg, [&] { stage_induce_dict(cfg); });
    }
    if (cmd_ingest->parsed()) {
      PipelineConfig cfg = resolve_config(ingest_opts);
      if (!ingest_domains.empty()) {
        cfg.domains = ingest_domains;
        cfg.snapshot.clear();
      }
      if (!ingest_snapshot.empty()) {
        cfg.snapshot = ingest_snapshot;
        cfg.domains.clear();
      }
      if (ingest_max_pages > 0) cfg.crawl.max_pages = ingest_max_pages;
      if (ingest_max_depth >= 0) cfg.crawl.max_depth = ingest_max_depth;
      if (ingest_delay >= 0) cfg.crawl.delay_ms = ingest_delay;
      HttplibClient client;
      return run_stage("ingest", cfg, [&] { stage_ingest(cfg, &client); });
    }
    if (cmd_adoc->parsed()) {
      PipelineConfig cfg = resolve_config(adoc_opts);
      if (!adoc_weights.empty()) {
        double u = 0, s = 0, c = 0;
        if (std::sscanf(adoc_weights.c_str(), "%lf,%lf,%lf", &u, &s, &c) != 3) {
          std::cerr << "error: --weights expects three comma-separated numbers\n";
          return 1;
        }
        cfg.docalign.weights = {u, s, c};
      }
      if (adoc_threshold >= 0) cfg.docalign.threshold = adoc_threshold;
      return run_stage("align-docs", cfg, [&] { stage_align_docs(cfg); });
    }
    if (cmd_asent->parsed()) {
      PipelineConfig cfg = resolve_config(asent_opts);
      if (!asent_dict.empty()) cfg.sentalign.dict_file = asent_dict;
      if (asent_dw >= 0) cfg.sentalign.params.dict_weight = asent_dw;
      if (asent_lw >= 0) cfg.sentalign.params.length_weight = asent_lw;
      if (asent_gap <= 0) cfg.sentalign.params.gap_penalty = asent_gap;
      if (asent_accept > -1e8) cfg.sentalign.params.accept_threshold = asent_accept;
      return run_stage("align-sents", cfg, [&] { stage_align_sents(cfg); });
    }
    if (cmd_rules->parsed()) {
      PipelineConfig cfg = resolve_config(rules_opts);
      return run_stage("filter-rules", cfg, [&] { stage_filter_rules(cfg); });
    }
    if (cmd_train->parsed()) {
      PipelineConfig cfg = resolve_config(train_opts);
      if (train_ratio > 0) cfg.filter.neg_ratio = train_ratio;
      if (train_trees > 0) cfg.filter.hp.n_trees = train_trees;
      if (train_depth > 0) cfg.filter.hp.max_depth = train_depth;
      if (train_subsample > 0) cfg.filter.hp.feature_subsample = train_subsample;
      return run_stage("train-filter", cfg, [&] { stage_train_filter(cfg); });
    }
    if (cmd_cls->parsed()) {
      PipelineConfig cfg = resolve_config(cls_opts);
      if (cls_threshold >= 0) cfg.filter.threshold = cls_threshold;
      return run_stage("classify", cfg, [&] { stage_classify(cfg); });
    }
    if (cmd_report->parsed()) {
      PipelineConfig cfg = resolve_config(report_opts);
      PipelineReport report;
      int code = run_stage("report", cfg, [&] { report = stage_report(cfg); });
      if (code == 0) std::cout << report.to_text();
      return code;
    }
    if (cmd_fixture->parsed()) {
      try {
        FixtureOutput out = gen_fixture(fixture_spec, fixture_out);
        std::cout << "fixture written to " << fixture_out << "\n"
                  << "pages " << out.pages_written << ", truth pairs " << out.truth_pairs << "\n"
                  << "config " << out.config.string() << "\n";
      } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }
    if (cmd_eval->parsed()) {
      Corpus mined = read_corpus(eval_mined, CorpusKind::C_filtered, {"xx", "yy"});
      Corpus truth = read_corpus(eval_truth, CorpusKind::C_filtered, {"xx", "yy"});
      EvalResult result = evaluate_against_truth(mined, truth);
      char buf[160];
      std::snprintf(buf, sizeof(buf), "precision %.4f\nrecall    %.4f\nf1        %.4f\n",
                    result.precision, result.recall, result.f1);
      std::cout << buf << "mined " << result.mined << ", correct " << result.correct_mined
                << ", truth " << result.truth << "\n";
      if (!eval_json.empty()) {
        nlohmann::json j = {{"precision", result.precision}, {"recall", result.recall},
                            {"f1", result.f1},               {"mined", result.mined},
                            {"correct", result.correct_mined}, {"truth", result.truth}};
        std::ofstream out(eval_json, std::ios::binary);
        out << j.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

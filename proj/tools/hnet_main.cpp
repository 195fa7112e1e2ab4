#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hnet/gradcheck.hpp"
#include "hnet/pipeline.hpp"
#include "hnet/synth.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 42;
  std::string checkpoint;
  double tau = 0.0;
  int budget = 0;
  double lr = 0.0;
  double dropout = -1.0;
  int epochs = 30;
  bool tiny = false;
  std::string embeddings;

  bool tau_set = false, budget_set = false, lr_set = false, dropout_set = false;
};

hnet::PipelineConfig resolve_config(const GlobalArgs& args) {
  hnet::PipelineConfig config;
  if (!args.config_path.empty())
    config = hnet::PipelineConfig::from_json_file(args.config_path);
  if (args.tiny) config.apply_tiny();
  if (args.tau_set) config.tau = args.tau;
  if (args.budget_set) config.budget = args.budget;
  if (args.lr_set) config.lr = args.lr;
  if (args.dropout_set) config.dropout = args.dropout;
  if (!args.embeddings.empty()) config.embeddings_path = args.embeddings;
  config.validate();
  return config;
}

void print_trace(const std::string& stage, const hnet::TrainTrace& trace) {
  std::cout << stage << ": " << trace.epoch_loss.size() << " epochs";
  if (!trace.epoch_loss.empty())
    std::cout << ", first loss " << trace.epoch_loss.front() << ", final loss "
              << trace.final_loss();
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HNet extractive multi-document summarizer"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON config file");
  app.add_option("--seed", args.seed, "RNG seed (init + training)");
  app.add_option("--checkpoint", args.checkpoint, "model checkpoint path");
  auto* tau_opt = app.add_option("--tau", args.tau, "redundancy threshold in (0,1)");
  auto* budget_opt = app.add_option("--budget", args.budget, "summary word budget");
  auto* lr_opt = app.add_option("--lr", args.lr, "Adam learning rate");
  auto* dropout_opt = app.add_option("--dropout", args.dropout, "dropout rate in [0,1)");
  app.add_option("--epochs", args.epochs, "training epochs");
  app.add_flag("--tiny", args.tiny, "test-scale model dimensions");
  app.add_option("--embeddings", args.embeddings, "embeddings file (overrides config)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string synth_out = "synth";
  int synth_clusters = 4, synth_docs = 3, synth_sents = 8;
  int synth_records = 24, synth_pairs = 30;
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--clusters", synth_clusters, "number of clusters");
  synth->add_option("--docs", synth_docs, "documents per cluster");
  synth->add_option("--sents", synth_sents, "sentences per document");
  synth->add_option("--pretrain-records", synth_records, "pretrain corpus size");
  synth->add_option("--pairs", synth_pairs, "similarity pairs");

  // pretrain
  auto* pretrain = app.add_subcommand("pretrain", "train the ranker on a JSONL corpus");
  std::string pretrain_corpus;
  pretrain->add_option("--corpus", pretrain_corpus, "pretrain JSONL file")->required();

  // finetune
  auto* finetune = app.add_subcommand("finetune", "fine-tune the ranker on clusters");
  std::string finetune_clusters, finetune_init;
  finetune->add_option("--clusters", finetune_clusters, "cluster set directory")->required();
  finetune->add_option("--init", finetune_init, "checkpoint to start from")->required();

  // train-sim
  auto* train_sim = app.add_subcommand("train-sim", "train the siamese redundancy model");
  std::string sim_pairs;
  train_sim->add_option("--pairs", sim_pairs, "relatedness pairs TSV")->required();

  // summarize
  auto* summarize = app.add_subcommand("summarize", "rank, filter and emit summaries");
  std::string sum_clusters, sum_sim_ckpt, sum_out = "summaries", sum_metric = "manhattan";
  std::string sum_dump;
  bool sum_doc_order = false, sum_ablate = false;
  summarize->add_option("--clusters", sum_clusters, "cluster set directory")->required();
  summarize->add_option("--sim-checkpoint", sum_sim_ckpt, "siamese checkpoint")->required();
  summarize->add_option("--out", sum_out, "summary output directory");
  summarize->add_option("--metric", sum_metric, "manhattan|euclidean|cosine");
  summarize->add_option("--dump-ranking", sum_dump, "write the full ranking TSV here");
  summarize->add_flag("--document-order", sum_doc_order,
                      "emit sentences in document order instead of score order");
  summarize->add_flag("--ablate-features", sum_ablate, "zero phi_e while scoring");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "ROUGE report for generated summaries");
  std::string eval_clusters, eval_summaries, eval_system = "hnet", eval_out;
  evaluate->add_option("--clusters", eval_clusters, "cluster set directory")->required();
  evaluate->add_option("--summaries", eval_summaries, "summary directory")->required();
  evaluate->add_option("--system", eval_system, "system name for the report row");
  evaluate->add_option("--out", eval_out, "also write the TSV row to this file");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");

  // simcheck
  auto* simcheck = app.add_subcommand("simcheck", "similarity report for sentence pairs");
  std::string simcheck_pairs, simcheck_metric = "manhattan", simcheck_out;
  simcheck->add_option("--pairs", simcheck_pairs, "pairs TSV")->required();
  simcheck->add_option("--metric", simcheck_metric, "manhattan|euclidean|cosine");
  simcheck->add_option("--out", simcheck_out, "write the TSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  args.tau_set = tau_opt->count() > 0;
  args.budget_set = budget_opt->count() > 0;
  args.lr_set = lr_opt->count() > 0;
  args.dropout_set = dropout_opt->count() > 0;

  try {
    const hnet::PipelineConfig config = resolve_config(args);
    hnet::TrainStageOptions stage;
    stage.seed = args.seed;
    stage.epochs = args.epochs;

    if (*synth) {
      hnet::SynthSpec spec;
      spec.seed = args.seed;
      spec.n_clusters = synth_clusters;
      spec.docs_per_cluster = synth_docs;
      spec.sents_per_doc = synth_sents;
      spec.pretrain_records = synth_records;
      spec.n_pairs = synth_pairs;
      spec.embed_dim = config.embed_dim;
      spec.out_dir = synth_out;
      const hnet::SynthPaths paths = hnet::generate_synthetic_corpus(spec);
      std::cout << "clusters:   " << paths.clusters_dir.string() << "\n"
                << "pretrain:   " << paths.pretrain_jsonl.string() << "\n"
                << "pairs:      " << paths.pairs_tsv.string() << "\n"
                << "embeddings: " << paths.embeddings_txt.string() << "\n";
    } else if (*pretrain) {
      const std::string out = args.checkpoint.empty() ? "pretrain.ckpt" : args.checkpoint;
      print_trace("pretrain", hnet::run_pretrain(config, pretrain_corpus, out, stage));
      std::cout << "checkpoint: " << out << "\n";
    } else if (*finetune) {
      const std::string out = args.checkpoint.empty() ? "finetune.ckpt" : args.checkpoint;
      print_trace("finetune", hnet::run_finetune(config, finetune_clusters,
                                                 finetune_init, out, stage));
      std::cout << "checkpoint: " << out << "\n";
    } else if (*train_sim) {
      const std::string out = args.checkpoint.empty() ? "siam.ckpt" : args.checkpoint;
      print_trace("train-sim", hnet::run_train_sim(config, sim_pairs, out, stage));
      std::cout << "checkpoint: " << out << "\n";
    } else if (*summarize) {
      if (args.checkpoint.empty())
        throw hnet::ConfigError("--checkpoint", "ranker checkpoint required");
      hnet::SummarizeOptions options;
      options.document_order = sum_doc_order;
      options.ablate_features = sum_ablate;
      options.metric = hnet::parse_metric(sum_metric);
      if (!sum_dump.empty()) options.ranking_dump = sum_dump;
      hnet::run_summarize(config, sum_clusters, args.checkpoint, sum_sim_ckpt, sum_out,
                          options);
      std::cout << "summaries: " << sum_out << "\n";
    } else if (*evaluate) {
      std::optional<std::filesystem::path> out;
      if (!eval_out.empty()) out = eval_out;
      const hnet::EvalResult result =
          hnet::run_evaluate(eval_clusters, eval_summaries, eval_system, out);
      std::cout << hnet::format_eval_row(eval_system, result) << "\n";
    } else if (*gradcheck) {
      const hnet::GradCheckReport ranker = hnet::gradcheck_ranker(args.seed);
      const hnet::GradCheckReport siamese = hnet::gradcheck_siamese(args.seed + 1);
      std::cout << "ranker:  " << ranker.entries.size() << " parameters, worst rel err "
                << ranker.worst << "\n";
      std::cout << "siamese: " << siamese.entries.size() << " parameters, worst rel err "
                << siamese.worst << "\n";
      const bool pass = ranker.pass() && siamese.pass();
      std::cout << (pass ? "[PASS]" : "[FAIL]") << " gradient check (tolerance 1e-4)\n";
      return pass ? 0 : 1;
    } else if (*simcheck) {
      if (args.checkpoint.empty())
        throw hnet::ConfigError("--checkpoint", "siamese checkpoint required");
      const double tau = args.tau_set ? args.tau : config.tau;
      if (!simcheck_out.empty()) {
        std::ofstream out(simcheck_out, std::ios::trunc);
        if (!out) throw hnet::Error("cannot write " + simcheck_out);
        hnet::run_simcheck(config, simcheck_pairs, args.checkpoint, tau,
                           hnet::parse_metric(simcheck_metric), out);
      } else {
        hnet::run_simcheck(config, simcheck_pairs, args.checkpoint, tau,
                           hnet::parse_metric(simcheck_metric), std::cout);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

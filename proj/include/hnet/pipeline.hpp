#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hnet/ranker.hpp"
#include "hnet/siamese.hpp"
#include "hnet/summarize.hpp"

namespace hnet {

// Run configuration; the JSON file carries exactly these keys.
struct PipelineConfig {
  int embed_dim = 250;
  std::vector<int> conv_widths = {1, 2, 3, 4, 5};
  int conv_dim = 125;
  int hidden_dim = 150;
  int feature_dim = 50;
  double lr = 0.009;
  double dropout = 0.2;
  int batch_size = 35;
  int budget = 100;
  double tau = 0.7;
  std::string stopwords_path;   // empty = built-in list
  std::string embeddings_path;

  static PipelineConfig from_json_file(const std::filesystem::path& path);
  void apply_tiny();  // test-scale dimensions
  void validate() const;

  CstiConfig csti_config() const;
  RankerConfig ranker_config() const;
  StopwordSet stopwords() const;
  EmbeddingTable embeddings() const;  // requires embeddings_path
};

// Corpus statistics ride next to the checkpoint so scoring is
// self-contained at inference time.
std::filesystem::path stats_path_for(const std::filesystem::path& checkpoint);

struct TrainStageOptions {
  std::uint64_t seed = 42;
  int epochs = 30;
  bool train_embeddings = false;
};

// Single-document corpus -> ranker checkpoint.
TrainTrace run_pretrain(const PipelineConfig& config, const std::filesystem::path& corpus,
                        const std::filesystem::path& out_checkpoint,
                        const TrainStageOptions& options);

// Cluster directories -> ranker checkpoint, optionally warm-started.
TrainTrace run_finetune(const PipelineConfig& config, const std::filesystem::path& clusters_dir,
                        const std::optional<std::filesystem::path>& init_checkpoint,
                        const std::filesystem::path& out_checkpoint,
                        const TrainStageOptions& options);

// Relatedness pairs -> siamese checkpoint.
TrainTrace run_train_sim(const PipelineConfig& config, const std::filesystem::path& pairs,
                         const std::filesystem::path& out_checkpoint,
                         const TrainStageOptions& options);

struct SummarizeOptions {
  bool document_order = false;  // order emitted sentences by (doc, index)
  bool ablate_features = false;
  SimMetric metric = SimMetric::manhattan;
  std::optional<std::filesystem::path> ranking_dump;
};

// One <cluster>.sum.txt per cluster under out_dir.
void run_summarize(const PipelineConfig& config, const std::filesystem::path& clusters_dir,
                   const std::filesystem::path& ranker_checkpoint,
                   const std::filesystem::path& siam_checkpoint,
                   const std::filesystem::path& out_dir, const SummarizeOptions& options);

struct EvalResult {
  double rouge1 = 0.0;  // recall, averaged over clusters
  double rouge2 = 0.0;
  int clusters = 0;
};

// Scores <summaries_dir>/<cluster>.sum.txt against each cluster's
// references; writes "system\trouge1\trouge2" (4 decimals) when out_path
// is given.
EvalResult run_evaluate(const std::filesystem::path& clusters_dir,
                        const std::filesystem::path& summaries_dir,
                        const std::string& system_name,
                        const std::optional<std::filesystem::path>& out_path);

std::string format_eval_row(const std::string& system_name, const EvalResult& result);

// simcheck: per-pair similarity report "sent_a\tsent_b\tg\tredundant".
void run_simcheck(const PipelineConfig& config, const std::filesystem::path& pairs,
                  const std::filesystem::path& siam_checkpoint, double tau,
                  SimMetric metric, std::ostream& out);

}  // namespace hnet

#include "hnet/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hnet/checkpoint.hpp"

namespace hnet {

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config." + key, "wrong type");
  }
}

// Warm-start embeddings: tokens trained into the store win over the table.
void add_embedding_params(ParamStore& store, const EmbeddingTable& table,
                          const std::vector<TrainRecord>& records) {
  for (const TrainRecord& record : records)
    for (const std::string& token : record.sentence.tokens) {
      const std::string name = "emb." + token;
      if (!store.has(name)) store.add(name, Tensor::from_vector(table.lookup(token)));
    }
}

std::vector<DocumentCluster> clusters_from_jsonl(const std::filesystem::path& corpus) {
  std::vector<DocumentCluster> clusters;
  for (const PretrainRecord& record : load_pretrain_jsonl(corpus))
    clusters.push_back(cluster_from_record(record));
  if (clusters.empty()) throw ParseError("corpus has no records: " + corpus.string());
  return clusters;
}

TrainTrace train_ranker_stage(const PipelineConfig& config,
                              std::vector<DocumentCluster> clusters,
                              const std::optional<std::filesystem::path>& init_checkpoint,
                              const std::filesystem::path& out_checkpoint,
                              const TrainStageOptions& options) {
  const StopwordSet stopwords = config.stopwords();
  const EmbeddingTable embeddings = config.embeddings();
  const CorpusStats stats = CorpusStats::build(clusters);
  const auto records = make_training_records(clusters, stats, stopwords);

  const RankerModel model(config.ranker_config());
  ParamStore store;
  Rng rng(options.seed);
  model.init_params(store, rng);
  store.set_rng_seed(options.seed);
  if (options.train_embeddings) add_embedding_params(store, embeddings, records);
  if (init_checkpoint)
    store.init_from(load_checkpoint(*init_checkpoint), /*strict=*/true,
                    /*lenient_prefix=*/"emb.");

  TrainHyper hyper;
  hyper.lr = config.lr;
  hyper.dropout = config.dropout;
  hyper.batch_size = config.batch_size;
  hyper.epochs = options.epochs;
  hyper.seed = rng.fork_seed();
  hyper.train_embeddings = options.train_embeddings;
  const TrainTrace trace = train_ranker(store, model, embeddings, records, hyper);

  save_checkpoint(store, out_checkpoint);
  stats.save(stats_path_for(out_checkpoint));
  return trace;
}

}  // namespace

PipelineConfig PipelineConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");

  static const char* const kKnown[] = {
      "embed_dim", "conv_widths", "conv_dim",       "hidden_dim",
      "feature_dim", "lr",        "dropout",        "batch_size",
      "budget",    "tau",         "stopwords_path", "embeddings_path",
  };
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("config." + key, "unknown key");
  }

  PipelineConfig config;
  config.embed_dim = get_field(j, "embed_dim", config.embed_dim);
  config.conv_widths = get_field(j, "conv_widths", config.conv_widths);
  config.conv_dim = get_field(j, "conv_dim", config.conv_dim);
  config.hidden_dim = get_field(j, "hidden_dim", config.hidden_dim);
  config.feature_dim = get_field(j, "feature_dim", config.feature_dim);
  config.lr = get_field(j, "lr", config.lr);
  config.dropout = get_field(j, "dropout", config.dropout);
  config.batch_size = get_field(j, "batch_size", config.batch_size);
  config.budget = get_field(j, "budget", config.budget);
  config.tau = get_field(j, "tau", config.tau);
  config.stopwords_path = get_field(j, "stopwords_path", config.stopwords_path);
  config.embeddings_path = get_field(j, "embeddings_path", config.embeddings_path);
  config.validate();
  return config;
}

void PipelineConfig::apply_tiny() {
  embed_dim = 10;
  conv_widths = {1, 2};
  conv_dim = 6;
  hidden_dim = 8;
  feature_dim = 6;
}

void PipelineConfig::validate() const {
  if (embed_dim < 1) throw ConfigError("config.embed_dim", "must be positive");
  if (conv_widths.empty()) throw ConfigError("config.conv_widths", "must be non-empty");
  for (std::size_t i = 0; i < conv_widths.size(); ++i) {
    if (conv_widths[i] < 1)
      throw ConfigError("config.conv_widths", "widths must be >= 1");
    if (i > 0 && conv_widths[i] <= conv_widths[i - 1])
      throw ConfigError("config.conv_widths", "widths must be strictly increasing");
  }
  if (conv_dim < 1) throw ConfigError("config.conv_dim", "must be positive");
  if (hidden_dim < 1) throw ConfigError("config.hidden_dim", "must be positive");
  if (feature_dim < 1) throw ConfigError("config.feature_dim", "must be positive");
  if (!(lr > 0.0)) throw ConfigError("config.lr", "must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw ConfigError("config.dropout", "must be in [0, 1)");
  if (batch_size < 1) throw ConfigError("config.batch_size", "must be positive");
  if (budget < 0) throw ConfigError("config.budget", "must be >= 0");
  if (tau <= 0.0 || tau >= 1.0) throw ConfigError("config.tau", "must be in (0, 1)");
}

CstiConfig PipelineConfig::csti_config() const {
  CstiConfig cfg;
  cfg.widths = conv_widths;
  cfg.embed_dim = embed_dim;
  cfg.conv_dim = conv_dim;
  cfg.hidden_dim = hidden_dim;
  return cfg;
}

RankerConfig PipelineConfig::ranker_config() const {
  RankerConfig cfg;
  cfg.csti = csti_config();
  cfg.feature_dim = feature_dim;
  return cfg;
}

StopwordSet PipelineConfig::stopwords() const {
  return stopwords_path.empty() ? StopwordSet::default_english()
                                : StopwordSet::from_file(stopwords_path);
}

EmbeddingTable PipelineConfig::embeddings() const {
  if (embeddings_path.empty())
    throw ConfigError("config.embeddings_path", "required for this stage");
  return load_embeddings(embeddings_path, embed_dim);
}

std::filesystem::path stats_path_for(const std::filesystem::path& checkpoint) {
  return std::filesystem::path(checkpoint.string() + ".stats.json");
}

TrainTrace run_pretrain(const PipelineConfig& config, const std::filesystem::path& corpus,
                        const std::filesystem::path& out_checkpoint,
                        const TrainStageOptions& options) {
  return train_ranker_stage(config, clusters_from_jsonl(corpus), std::nullopt,
                            out_checkpoint, options);
}

TrainTrace run_finetune(const PipelineConfig& config, const std::filesystem::path& clusters_dir,
                        const std::optional<std::filesystem::path>& init_checkpoint,
                        const std::filesystem::path& out_checkpoint,
                        const TrainStageOptions& options) {
  return train_ranker_stage(config, load_cluster_set(clusters_dir), init_checkpoint,
                            out_checkpoint, options);
}

TrainTrace run_train_sim(const PipelineConfig& config, const std::filesystem::path& pairs_path,
                         const std::filesystem::path& out_checkpoint,
                         const TrainStageOptions& options) {
  const EmbeddingTable embeddings = config.embeddings();
  const auto pairs = load_pairs_tsv(pairs_path);

  const SiamModel model(config.csti_config());
  ParamStore store;
  Rng rng(options.seed);
  model.init_params(store, rng);
  store.set_rng_seed(options.seed);

  TrainHyper hyper;
  hyper.lr = config.lr;
  hyper.dropout = 0.0;  // pure forward pass; pair targets are exact
  hyper.batch_size = config.batch_size;
  hyper.epochs = options.epochs;
  hyper.seed = rng.fork_seed();
  const TrainTrace trace = train_siamese(store, model, embeddings, pairs, hyper);

  save_checkpoint(store, out_checkpoint);
  return trace;
}

void run_summarize(const PipelineConfig& config, const std::filesystem::path& clusters_dir,
                   const std::filesystem::path& ranker_checkpoint,
                   const std::filesystem::path& siam_checkpoint,
                   const std::filesystem::path& out_dir, const SummarizeOptions& options) {
  const StopwordSet stopwords = config.stopwords();
  const EmbeddingTable embeddings = config.embeddings();
  const ParamStore ranker_store = load_checkpoint(ranker_checkpoint);
  const ParamStore siam_store = load_checkpoint(siam_checkpoint);
  const CorpusStats stats = CorpusStats::load(stats_path_for(ranker_checkpoint));
  const RankerModel ranker(config.ranker_config());
  const SiamModel siam(config.csti_config());

  std::filesystem::create_directories(out_dir);
  std::ofstream dump;
  if (options.ranking_dump) {
    dump.open(*options.ranking_dump, std::ios::trunc);
    if (!dump) throw Error("cannot write ranking dump: " + options.ranking_dump->string());
    dump << std::fixed << std::setprecision(6);
  }

  for (const DocumentCluster& cluster : load_cluster_set(clusters_dir)) {
    const auto ranked = rank_cluster(cluster, ranker, ranker_store, embeddings, stats,
                                     stopwords, options.ablate_features);
    if (options.ranking_dump)
      for (const RankedSentence& item : ranked)
        dump << cluster.cluster_id << "\t" << item.sentence.doc_id << "\t"
             << item.index_in_doc << "\t" << item.score << "\t"
             << item.sentence.raw_text << "\n";

    Summary summary = select_summary(ranked, siam, siam_store, embeddings, config.tau,
                                     SummaryBudget{config.budget}, options.metric);
    if (options.document_order) {
      std::stable_sort(summary.items.begin(), summary.items.end(),
                       [](const RankedSentence& a, const RankedSentence& b) {
                         if (a.doc_pos != b.doc_pos) return a.doc_pos < b.doc_pos;
                         return a.index_in_doc < b.index_in_doc;
                       });
    }
    std::ofstream out(out_dir / (cluster.cluster_id + ".sum.txt"), std::ios::trunc);
    if (!out) throw Error("cannot write summary for " + cluster.cluster_id);
    for (const RankedSentence& item : summary.items) out << item.sentence.raw_text << "\n";
  }
}

EvalResult run_evaluate(const std::filesystem::path& clusters_dir,
                        const std::filesystem::path& summaries_dir,
                        const std::string& system_name,
                        const std::optional<std::filesystem::path>& out_path) {
  EvalResult result;
  const StopwordSet no_stopwords = StopwordSet::empty();
  for (const DocumentCluster& cluster : load_cluster_set(clusters_dir)) {
    const auto summary_path = summaries_dir / (cluster.cluster_id + ".sum.txt");
    if (!std::filesystem::exists(summary_path))
      throw Error("missing summary file: " + summary_path.string());
    std::ifstream in(summary_path);
    TokenSeq candidate;
    std::string line;
    while (std::getline(in, line)) {
      auto tokens = tokenize(line);
      candidate.insert(candidate.end(), tokens.begin(), tokens.end());
    }
    const auto refs = flatten_references(cluster);
    if (refs.empty()) throw Error("cluster has no references: " + cluster.cluster_id);
    result.rouge1 += rouge_n(candidate, refs, 1, false, no_stopwords).recall;
    result.rouge2 += rouge_n(candidate, refs, 2, false, no_stopwords).recall;
    ++result.clusters;
  }
  if (result.clusters > 0) {
    result.rouge1 /= result.clusters;
    result.rouge2 /= result.clusters;
  }
  if (out_path) {
    std::ofstream out(*out_path, std::ios::trunc);
    if (!out) throw Error("cannot write report: " + out_path->string());
    out << format_eval_row(system_name, result) << "\n";
  }
  return result;
}

std::string format_eval_row(const std::string& system_name, const EvalResult& result) {
  std::ostringstream os;
  os << system_name << "\t" << std::fixed << std::setprecision(4) << result.rouge1
     << "\t" << result.rouge2;
  return os.str();
}

void run_simcheck(const PipelineConfig& config, const std::filesystem::path& pairs_path,
                  const std::filesystem::path& siam_checkpoint, double tau,
                  SimMetric metric, std::ostream& out) {
  if (tau <= 0.0 || tau >= 1.0) throw ConfigError("tau", "must be in (0, 1)");
  const EmbeddingTable embeddings = config.embeddings();
  const ParamStore store = load_checkpoint(siam_checkpoint);
  const SiamModel model(config.csti_config());
  out << std::fixed << std::setprecision(6);
  for (const SentencePair& pair : load_pairs_tsv(pairs_path)) {
    const double g =
        similarity(model, store, embeddings, pair.sent_a, pair.sent_b, metric);
    out << pair.sent_a.raw_text << "\t" << pair.sent_b.raw_text << "\t" << g << "\t"
        << (g >= tau ? "true" : "false") << "\n";
  }
}

}  // namespace hnet

#pragma once

#include <cstdint>
#include <filesystem>

namespace hnet {

// Desk-scale stand-in for the real corpora: template-grammar clusters with
// fact-dense sentences planted verbatim into references (so ROUGE-2 labels
// carry learnable signal), a single-document pretrain corpus drawn from
// the same grammar, relatedness pairs (same template = 5, disjoint = 1)
// and a random embedding table covering the generated vocabulary.
struct SynthSpec {
  std::uint64_t seed = 1;
  int n_clusters = 4;
  int docs_per_cluster = 3;
  int sents_per_doc = 8;
  int pretrain_records = 24;
  int sents_per_record = 8;
  int n_pairs = 30;
  int embed_dim = 50;
  std::filesystem::path out_dir;
};

struct SynthPaths {
  std::filesystem::path clusters_dir;
  std::filesystem::path pretrain_jsonl;
  std::filesystem::path pairs_tsv;
  std::filesystem::path embeddings_txt;
};

// Pure function of its arguments: the same spec always produces
// byte-identical files.
SynthPaths generate_synthetic_corpus(const SynthSpec& spec);

}  // namespace hnet

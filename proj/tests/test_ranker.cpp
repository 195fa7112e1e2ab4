#include <doctest.h>

#include "hnet/ranker.hpp"

using namespace hnet;

namespace {

EmbeddingTable random_table(int dim, const std::vector<std::string>& vocab,
                            std::uint64_t seed) {
  EmbeddingTable table(dim);
  Rng rng(seed);
  for (const auto& token : vocab) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.uniform(-1.0, 1.0);
    table.insert(token, std::move(v));
  }
  return table;
}

Sentence make_sentence(const std::vector<std::string>& tokens, const std::string& doc,
                       int index) {
  Sentence s;
  s.tokens = tokens;
  s.doc_id = doc;
  s.index_in_doc = index;
  s.raw_text = join_tokens(tokens);
  return s;
}

DocFeatures some_features() {
  DocFeatures f;
  f.position = 0.5;
  f.avg_cluster_freq = 0.1;
  f.avg_tf = 0.2;
  f.avg_idf_over_len = 0.3;
  f.max_idf = 1.1;
  return f;
}

}  // namespace

TEST_CASE("zero regression weights score exactly 0.5") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(1);
  model.init_params(store, rng);
  store.at("ranker.regress.weight").mat().setZero();

  const EmbeddingTable table = random_table(model.config().csti.embed_dim, {"a", "b"}, 2);
  const double y =
      model.score_value(store, table, make_sentence({"a", "b"}, "d", 1), some_features());
  CHECK(y == 0.5);
}

TEST_CASE("zeroing phi_e reproduces the feature-ablated path exactly") {
  const RankerConfig config = RankerConfig::tiny();
  const RankerModel model(config);
  ParamStore store;
  Rng rng(3);
  model.init_params(store, rng);
  const EmbeddingTable table =
      random_table(config.csti.embed_dim, {"a", "b", "c"}, 4);
  const Sentence sentence = make_sentence({"a", "b", "c"}, "d", 1);

  SUBCASE("with weight only on the feature block, ablation reverts to 0.5") {
    Matrix& w = store.at("ranker.regress.weight").mat();
    w.setZero();
    w.rightCols(config.feature_dim).setConstant(0.3);
    const double full = model.score_value(store, table, sentence, some_features());
    const double ablated =
        model.score_value(store, table, sentence, some_features(), true);
    CHECK(full != 0.5);
    CHECK(ablated == 0.5);
  }

  SUBCASE("ablated score equals the score with phi_e forced to zero") {
    // the phi_f contribution to the pre-activation is untouched
    Graph g(store);
    const auto words = embed_tokens(g, table, sentence.tokens);
    ScoreOptions ablate;
    ablate.ablate_features = true;
    const double via_flag = g.scalar(model.score(g, words, some_features(), ablate));

    Graph g2(store);
    const auto words2 = embed_tokens(g2, table, sentence.tokens);
    const TreeRoot tree = model.csti().encode(g2, words2);
    const std::array<Var, 2> parts = {tree.root.h,
                                      g2.zeros(config.feature_dim, 1)};
    const double manual =
        g2.scalar(logistic(g2.param("ranker.regress.weight") * concat_rows(parts)));
    CHECK(via_flag == manual);
  }
}

TEST_CASE("ranker MSE gradient matches finite differences end to end") {
  RankerConfig config;
  config.csti.widths = {1, 2};
  config.csti.embed_dim = 4;
  config.csti.conv_dim = 3;
  config.csti.hidden_dim = 5;
  config.feature_dim = 4;
  const RankerModel model(config);
  ParamStore store;
  Rng rng(5);
  model.init_params(store, rng);
  const EmbeddingTable table = random_table(4, {"a", "b", "c"}, 6);
  const Sentence sentence = make_sentence({"a", "c", "b"}, "d", 1);

  const auto build = [&](Graph& g) {
    const auto words = embed_tokens(g, table, sentence.tokens);
    const Var y = model.score(g, words, some_features());
    return square(y - g.scalar_input(0.7));
  };
  const auto fb = forward_backward(store, build);
  const auto numeric = finite_diff_grad(
      [&](const ParamStore& p) {
        Graph g(p);
        return g.scalar(build(g));
      },
      store, 1e-5);
  CHECK(max_gradient_rel_error(fb.grads, numeric) < 1e-4);
}

TEST_CASE("a single record with target 0.5 is fit to loss < 1e-6 within 200 epochs") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(7);
  model.init_params(store, rng);
  const EmbeddingTable table =
      random_table(model.config().csti.embed_dim, {"x", "y"}, 8);

  std::vector<TrainRecord> records(1);
  records[0].sentence = make_sentence({"x", "y"}, "d", 1);
  records[0].features = some_features();
  records[0].target = 0.5;

  TrainHyper hyper;
  hyper.lr = 0.009;
  hyper.dropout = 0.0;
  hyper.batch_size = 35;
  hyper.epochs = 200;
  hyper.seed = 9;
  const TrainTrace trace = train_ranker(store, model, table, records, hyper);
  CHECK(trace.final_loss() < 1e-6);
}

TEST_CASE("training validates its dataset") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(10);
  model.init_params(store, rng);
  const EmbeddingTable table =
      random_table(model.config().csti.embed_dim, {"x"}, 11);
  TrainHyper hyper;

  std::vector<TrainRecord> empty;
  CHECK_THROWS_AS(train_ranker(store, model, table, empty, hyper), Error);

  std::vector<TrainRecord> bad(1);
  bad[0].sentence = make_sentence({"x"}, "doc7", 3);
  bad[0].target = 1.5;
  try {
    train_ranker(store, model, table, bad, hyper);
    FAIL("expected Error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("doc7:3") != std::string::npos);
    CHECK(msg.find("1.5") != std::string::npos);
  }
}

TEST_CASE("identical seeds give identical loss traces") {
  const auto run = [] {
    const RankerModel model(RankerConfig::tiny());
    ParamStore store;
    Rng rng(12);
    model.init_params(store, rng);
    const EmbeddingTable table =
        random_table(model.config().csti.embed_dim, {"a", "b", "c", "d"}, 13);
    std::vector<TrainRecord> records;
    const std::vector<std::vector<std::string>> sentences = {
        {"a", "b"}, {"b", "c", "d"}, {"d", "a"}, {"c", "c", "a"}};
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      TrainRecord r;
      r.sentence = make_sentence(sentences[i], "d", static_cast<int>(i) + 1);
      r.features = some_features();
      r.target = 0.2 * static_cast<double>(i + 1);
      records.push_back(std::move(r));
    }
    TrainHyper hyper;
    hyper.dropout = 0.3;  // exercises the mask stream too
    hyper.batch_size = 2;
    hyper.epochs = 12;
    hyper.seed = 14;
    return train_ranker(store, model, table, records, hyper);
  };
  const TrainTrace a = run();
  const TrainTrace b = run();
  REQUIRE(a.epoch_loss.size() == b.epoch_loss.size());
  for (std::size_t i = 0; i < a.epoch_loss.size(); ++i)
    CHECK(a.epoch_loss[i] == b.epoch_loss[i]);
}

TEST_CASE("ranking is sorted with deterministic tie-breaks") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(15);
  model.init_params(store, rng);
  store.at("ranker.regress.weight").mat().setZero();  // every score is 0.5
  const EmbeddingTable table =
      random_table(model.config().csti.embed_dim, {"a", "b"}, 16);

  DocumentCluster cluster;
  cluster.cluster_id = "c";
  for (const char* id : {"d1", "d2"}) {
    Document doc;
    doc.doc_id = id;
    doc.sentences = {make_sentence({"a"}, id, 1), make_sentence({"b"}, id, 2)};
    cluster.documents.push_back(std::move(doc));
  }
  const CorpusStats stats = CorpusStats::build({&cluster, 1});
  const auto ranked = rank_cluster(cluster, model, store, table, stats,
                                   StopwordSet::default_english());
  REQUIRE(ranked.size() == 4);
  // equal scores: (doc_pos, index) order
  CHECK(ranked[0].doc_pos == 0);
  CHECK(ranked[0].index_in_doc == 1);
  CHECK(ranked[1].doc_pos == 0);
  CHECK(ranked[1].index_in_doc == 2);
  CHECK(ranked[2].doc_pos == 1);
  CHECK(ranked[3].doc_pos == 1);

  for (const RankedSentence& item : ranked) {
    CHECK(item.score > 0.0);
    CHECK(item.score < 1.0);
  }
}

TEST_CASE("an earlier equal-scoring sentence outranks a later one") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(17);
  model.init_params(store, rng);
  const EmbeddingTable table =
      random_table(model.config().csti.embed_dim, {"a", "b", "q"}, 18);

  // identical documents: the same sentence scores identically in both, so
  // the tie must fall to the earlier document
  DocumentCluster cluster;
  cluster.cluster_id = "c";
  for (const char* id : {"d1", "d2"}) {
    Document doc;
    doc.doc_id = id;
    doc.sentences = {make_sentence({"a", "b"}, id, 1), make_sentence({"q"}, id, 2)};
    cluster.documents.push_back(std::move(doc));
  }
  const CorpusStats stats = CorpusStats::build({&cluster, 1});
  const auto ranked = rank_cluster(cluster, model, store, table, stats,
                                   StopwordSet::default_english());
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].score == ranked[1].score);
  CHECK(ranked[0].doc_pos == 0);
  CHECK(ranked[1].doc_pos == 1);
  CHECK(ranked[0].index_in_doc == ranked[1].index_in_doc);
}

TEST_CASE("empty cluster ranks to an empty sequence") {
  const RankerModel model(RankerConfig::tiny());
  ParamStore store;
  Rng rng(19);
  model.init_params(store, rng);
  const EmbeddingTable table = random_table(model.config().csti.embed_dim, {"a"}, 20);
  DocumentCluster cluster;
  const CorpusStats stats = CorpusStats::build({&cluster, 1});
  CHECK(rank_cluster(cluster, model, store, table, stats,
                     StopwordSet::default_english())
            .empty());
}

TEST_CASE("scores stay in (0,1) across random models and sentences") {
  Rng rng(21);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 10; ++trial) {
    const RankerModel model(RankerConfig::tiny());
    ParamStore store;
    Rng init(rng.fork_seed());
    model.init_params(store, init);
    const EmbeddingTable table =
        random_table(model.config().csti.embed_dim, vocab, rng.fork_seed());
    Sentence s;
    const int len = 1 + static_cast<int>(rng.below(10));
    for (int i = 0; i < len; ++i)
      s.tokens.push_back(vocab[rng.below(vocab.size())]);
    s.doc_id = "d";
    s.index_in_doc = 1;
    const double y = model.score_value(store, table, s, some_features());
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }
}

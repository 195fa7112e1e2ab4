#include "hnet/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hnet {

namespace {

bool is_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

std::vector<std::string> read_nonblank_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// 127-word default English stopword list.
const char* const kDefaultStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which",
    "who", "whom", "this", "that", "these", "those", "am", "is", "are",
    "was", "were", "be", "been", "being", "have", "has", "had", "having",
    "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if",
    "or", "because", "as", "until", "while", "of", "at", "by", "for",
    "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all", "any",
    "both", "each", "few", "more", "most", "other", "some", "such", "no",
    "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s",
    "t", "can", "will", "just", "don", "should", "now",
};

}  // namespace

std::size_t DocumentCluster::sentence_count() const {
  std::size_t n = 0;
  for (const Document& doc : documents) n += doc.sentences.size();
  return n;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isspace(c) != 0) {
      flush();
    } else if (is_word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    }
  }
  flush();
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

const StopwordSet& StopwordSet::default_english() {
  static const StopwordSet instance = [] {
    StopwordSet s;
    for (const char* w : kDefaultStopwords) s.words_.insert(w);
    return s;
  }();
  return instance;
}

StopwordSet StopwordSet::from_file(const std::filesystem::path& path) {
  StopwordSet s;
  for (const std::string& line : read_nonblank_lines(path)) {
    for (std::string& token : tokenize(line)) s.words_.insert(std::move(token));
  }
  return s;
}

StopwordSet StopwordSet::empty() { return StopwordSet{}; }

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim), zero_(Vector::Zero(dim)) {
  if (dim <= 0) throw Error("embedding dim must be positive");
}

void EmbeddingTable::insert(const std::string& token, Vector v) {
  if (v.size() != dim_)
    throw Error("embedding for '" + token + "' has wrong dimension");
  table_[token] = std::move(v);
}

const Vector& EmbeddingTable::lookup(const std::string& token) const {
  auto it = table_.find(token);
  return it == table_.end() ? zero_ : it->second;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embeddings file: " + path.string());
  EmbeddingTable table(dim);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    Vector v(dim);
    int got = 0;
    double x;
    while (got < dim && ss >> x) v(got++) = x;
    std::string extra;
    if (got != dim || (ss >> extra)) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": expected " << dim
         << " components after the word, line is malformed";
      throw ParseError(os.str());
    }
    table.insert(word, std::move(v));
  }
  return table;
}

DocumentCluster load_cluster(const std::filesystem::path& dir) {
  const auto docs_dir = dir / "docs";
  const auto refs_dir = dir / "refs";
  if (!std::filesystem::is_directory(docs_dir))
    throw ParseError("cluster is missing docs/ subdirectory: " + dir.string());
  if (!std::filesystem::is_directory(refs_dir))
    throw ParseError("cluster is missing refs/ subdirectory: " + dir.string());

  DocumentCluster cluster;
  cluster.cluster_id = dir.filename().string();

  for (const auto& path : sorted_files(docs_dir)) {
    Document doc;
    doc.doc_id = path.stem().string();
    int index = 0;
    for (const std::string& line : read_nonblank_lines(path)) {
      Sentence sentence;
      sentence.tokens = tokenize(line);
      if (sentence.tokens.empty()) continue;
      sentence.doc_id = doc.doc_id;
      sentence.index_in_doc = ++index;
      sentence.raw_text = line;
      doc.sentences.push_back(std::move(sentence));
    }
    cluster.documents.push_back(std::move(doc));
  }
  if (cluster.documents.empty())
    throw ParseError("cluster has no documents: " + dir.string());

  for (const auto& path : sorted_files(refs_dir)) {
    ReferenceSummary ref;
    for (const std::string& line : read_nonblank_lines(path)) {
      auto tokens = tokenize(line);
      if (!tokens.empty()) ref.push_back(std::move(tokens));
    }
    if (!ref.empty()) cluster.references.push_back(std::move(ref));
  }
  return cluster;
}

std::vector<DocumentCluster> load_cluster_set(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ParseError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> subdirs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_directory()) subdirs.push_back(entry.path());
  std::sort(subdirs.begin(), subdirs.end());
  if (subdirs.empty())
    throw ParseError("no cluster subdirectories in " + dir.string());
  std::vector<DocumentCluster> clusters;
  clusters.reserve(subdirs.size());
  for (const auto& sub : subdirs) clusters.push_back(load_cluster(sub));
  return clusters;
}

std::vector<PretrainRecord> load_pretrain_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus: " + path.string());
  std::vector<PretrainRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      PretrainRecord record;
      record.id = j.at("id").get<std::string>();
      record.sentences = j.at("sentences").get<std::vector<std::string>>();
      record.references =
          j.at("references").get<std::vector<std::vector<std::string>>>();
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": " << e.what();
      throw ParseError(os.str());
    }
  }
  return records;
}

DocumentCluster cluster_from_record(const PretrainRecord& record) {
  DocumentCluster cluster;
  cluster.cluster_id = record.id;
  Document doc;
  doc.doc_id = record.id;
  int index = 0;
  for (const std::string& text : record.sentences) {
    Sentence sentence;
    sentence.tokens = tokenize(text);
    if (sentence.tokens.empty()) continue;
    sentence.doc_id = doc.doc_id;
    sentence.index_in_doc = ++index;
    sentence.raw_text = text;
    doc.sentences.push_back(std::move(sentence));
  }
  cluster.documents.push_back(std::move(doc));
  for (const auto& ref_sentences : record.references) {
    ReferenceSummary ref;
    for (const std::string& text : ref_sentences) {
      auto tokens = tokenize(text);
      if (!tokens.empty()) ref.push_back(std::move(tokens));
    }
    if (!ref.empty()) cluster.references.push_back(std::move(ref));
  }
  return cluster;
}

std::vector<SentencePair> load_pairs_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pairs file: " + path.string());
  std::vector<SentencePair> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": expected 3 tab-separated fields";
      throw ParseError(os.str());
    }
    SentencePair pair;
    pair.sent_a.raw_text = line.substr(0, tab1);
    pair.sent_b.raw_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
    pair.sent_a.tokens = tokenize(pair.sent_a.raw_text);
    pair.sent_b.tokens = tokenize(pair.sent_b.raw_text);
    pair.sent_a.index_in_doc = pair.sent_b.index_in_doc = 1;
    try {
      pair.relatedness = std::stod(line.substr(tab2 + 1));
    } catch (const std::exception&) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": relatedness is not a number";
      throw ParseError(os.str());
    }
    if (pair.relatedness < 1.0 || pair.relatedness > 5.0) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": relatedness "
         << pair.relatedness << " outside [1, 5]";
      throw ParseError(os.str());
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace hnet

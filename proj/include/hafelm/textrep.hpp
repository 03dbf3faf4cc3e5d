#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hafelm/dataset.hpp"

namespace hafelm {

/// Pretrained word vectors keyed by token.
class WordVectorTable {
 public:
  WordVectorTable(std::size_t dim, std::unordered_map<std::string, Vector> entries,
                  std::size_t duplicates_skipped = 0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  /// Rows dropped at load because their token was already present.
  std::size_t duplicates_skipped() const { return duplicates_; }
  const Vector* find(const std::string& token) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, Vector> entries_;
  std::size_t duplicates_;
};

/// Text word-vector format: an optional "count dim" header, then
/// "token v1 ... vdim" per line. The first occurrence of a token wins.
WordVectorTable load_word_vectors(const std::filesystem::path& path);
WordVectorTable parse_word_vectors(std::istream& in);

struct Document {
  std::vector<std::string> tokens;
  std::optional<std::string> label;
};

/// Lowercases, splits on Unicode whitespace, strips leading and trailing
/// ASCII punctuation from each token and drops tokens left empty.
Document tokenize(const std::string& text);

struct DocVector {
  Vector values;
  std::size_t oov_count = 0;
};

/// Mean of the in-vocabulary token vectors; OOV tokens are skipped and
/// counted. Throws EmptyDocumentError when nothing is in vocabulary.
DocVector doc_vector(const Document& doc, const WordVectorTable& table);

Dataset corpus_to_dataset(const std::vector<Document>& docs, const WordVectorTable& table);

/// One document per line: "label<TAB>text".
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in);

}  // namespace hafelm

#include "hafelm/textrep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hafelm/error.hpp"

namespace hafelm {

WordVectorTable::WordVectorTable(std::size_t dim, std::unordered_map<std::string, Vector> entries,
                                 std::size_t duplicates_skipped)
    : dim_(dim), entries_(std::move(entries)), duplicates_(duplicates_skipped) {
  if (dim_ < 1) throw Error(ErrorKind::Config, "word vector dimension must be >= 1");
  for (const auto& [token, vec] : entries_) {
    if (token.empty()) throw Error(ErrorKind::Config, "empty token in word vector table");
    if (static_cast<std::size_t>(vec.size()) != dim_)
      throw Error(ErrorKind::Shape, "word vector for '" + token + "' has wrong length");
  }
}

const Vector* WordVectorTable::find(const std::string& token) const {
  const auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string> whitespace_fields(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string f;
  while (ss >> f) out.push_back(f);
  return out;
}

bool parse_real(const std::string& s, double& v) {
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v);
}

bool parse_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

WordVectorTable parse_word_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::size_t duplicates = 0;
  bool first_content = true;
  std::unordered_map<std::string, Vector> entries;

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = whitespace_fields(line);
    if (fields.empty()) continue;
    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && parse_count(fields[0]) && parse_count(fields[1])) continue;
    }
    if (fields.size() < 2) throw ParseError(line_no, "word vector row needs a token and values");
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim)
      throw ParseError(line_no, "expected " + std::to_string(dim) + " values, found " +
                                    std::to_string(fields.size() - 1));
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_real(fields[j + 1], v(static_cast<Eigen::Index>(j))))
        throw ParseError(line_no, "non-numeric value '" + fields[j + 1] + "'");
    }
    if (!entries.try_emplace(fields[0], std::move(v)).second) ++duplicates;
  }
  if (entries.empty()) throw Error(ErrorKind::EmptyInput, "word vector file has no entries");
  return WordVectorTable(dim, std::move(entries), duplicates);
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::EmptyInput, "cannot open " + path.string());
  return parse_word_vectors(in);
}

namespace {

// Minimal UTF-8 decoding. Malformed bytes are kept verbatim as
// single-byte units.
struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint decode(const std::string& s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0)
      return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0)
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  return {b0, 1};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

// Simple case mapping for Latin, Greek and Cyrillic; other scripts are
// left unchanged.
char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if ((c >= 0xC0 && c <= 0xDE) && c != 0xD7) return c + 32;
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x138 && c != 0x149 && c != 0x17F) {
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (odd_upper) return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x178) return 0xFF;
    return (c % 2 == 0) ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool is_ascii_punct(char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

void flush_token(std::string& token, std::vector<std::string>& out) {
  std::size_t b = 0, e = token.size();
  while (b < e && is_ascii_punct(token[b])) ++b;
  while (e > b && is_ascii_punct(token[e - 1])) --e;
  if (e > b) out.emplace_back(token.substr(b, e - b));
  token.clear();
}

}  // namespace

Document tokenize(const std::string& text) {
  Document doc;
  std::string token;
  for (std::size_t i = 0; i < text.size();) {
    const auto cp = decode(text, i);
    if (is_space(cp.value)) {
      flush_token(token, doc.tokens);
    } else if (cp.length == 1 && static_cast<unsigned char>(text[i]) >= 0x80) {
      token.push_back(text[i]);
    } else {
      encode(to_lower(cp.value), token);
    }
    i += cp.length;
  }
  flush_token(token, doc.tokens);
  return doc;
}

DocVector doc_vector(const Document& doc, const WordVectorTable& table) {
  DocVector out{Vector::Zero(static_cast<Eigen::Index>(table.dim())), 0};
  std::size_t hits = 0;
  std::vector<std::string> oov;
  for (const auto& t : doc.tokens) {
    if (const auto* v = table.find(t)) {
      out.values += *v;
      ++hits;
    } else {
      oov.push_back(t);
    }
  }
  if (hits == 0) throw EmptyDocumentError(std::move(oov));
  out.values /= static_cast<double>(hits);
  out.oov_count = oov.size();
  return out;
}

Dataset corpus_to_dataset(const std::vector<Document>& docs, const WordVectorTable& table) {
  if (docs.empty()) throw Error(ErrorKind::EmptyInput, "corpus has no documents");
  Matrix features(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(table.dim()));
  std::vector<ClassIndex> labels;
  std::vector<std::string> names;
  std::unordered_map<std::string, ClassIndex> index;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].label)
      throw Error(ErrorKind::Config, "document " + std::to_string(i) + " has no label");
    try {
      features.row(static_cast<Eigen::Index>(i)) = doc_vector(docs[i], table).values.transpose();
    } catch (const EmptyDocumentError& e) {
      throw EmptyDocumentError(e.oov_tokens(), static_cast<std::ptrdiff_t>(i));
    }
    auto [it, inserted] = index.try_emplace(*docs[i].label, names.size());
    if (inserted) names.push_back(*docs[i].label);
    labels.push_back(it->second);
  }
  const auto m = names.size();
  return Dataset(std::move(features), std::move(labels), m, std::move(names));
}

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError(line_no, "expected 'label<TAB>text'");
    Document doc = tokenize(line.substr(tab + 1));
    doc.label = line.substr(0, tab);
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw Error(ErrorKind::EmptyInput, "corpus has no documents");
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::EmptyInput, "cannot open " + path.string());
  return parse_corpus(in);
}

}  // namespace hafelm

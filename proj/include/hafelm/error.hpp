#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hafelm {

enum class ErrorKind {
  Usage,
  Config,
  Parse,
  EmptyInput,
  Degenerate,
  Shape,
  Alignment,
  EmptyClass,
  EmptyDocument,
  MembershipRange,
  Numeric,
  Search,
};

/// Short machine-parsable tag, e.g. "parse" or "membership-range".
const char* error_tag(ErrorKind kind);

/// Process exit code for the CLI: 2 usage, 3 data, 4 numeric.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure at a 1-based line of an input file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A document with no in-vocabulary tokens.
class EmptyDocumentError : public Error {
 public:
  EmptyDocumentError(std::vector<std::string> oov_tokens,
                     std::ptrdiff_t document_index = -1);

  const std::vector<std::string>& oov_tokens() const noexcept { return oov_; }
  /// -1 when raised outside a corpus.
  std::ptrdiff_t document_index() const noexcept { return index_; }

 private:
  std::vector<std::string> oov_;
  std::ptrdiff_t index_;
};

}  // namespace hafelm

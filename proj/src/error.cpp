#include "hafelm/error.hpp"

namespace hafelm {

const char* error_tag(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::EmptyClass: return "empty-class";
    case ErrorKind::EmptyDocument: return "empty-document";
    case ErrorKind::MembershipRange: return "membership-range";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Search: return "search";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Numeric:
    case ErrorKind::Search:
      return 4;
    default:
      return 3;
  }
}

namespace {
std::string empty_doc_message(const std::vector<std::string>& oov, std::ptrdiff_t index) {
  std::string msg = index >= 0 ? "document " + std::to_string(index) + " has" : "document has";
  msg += " no in-vocabulary tokens";
  if (!oov.empty()) {
    msg += " (oov:";
    for (std::size_t i = 0; i < oov.size() && i < 8; ++i) msg += " " + oov[i];
    if (oov.size() > 8) msg += " ...";
    msg += ")";
  }
  return msg;
}
}  // namespace

EmptyDocumentError::EmptyDocumentError(std::vector<std::string> oov_tokens,
                                       std::ptrdiff_t document_index)
    : Error(ErrorKind::EmptyDocument, empty_doc_message(oov_tokens, document_index)),
      oov_(std::move(oov_tokens)),
      index_(document_index) {}

}  // namespace hafelm

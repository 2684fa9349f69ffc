#include "cskd/core/marked_head.hpp"

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"
#include "cskd/core/utf8.hpp"

namespace cskd {

std::string_view to_string(SpanKind k) {
  return k == SpanKind::kInstance ? "instance" : "concept";
}

MarkedHead::MarkedHead(std::string text, Span span, SpanKind kind)
    : text_(std::move(text)), span_(span), kind_(kind) {
  const std::size_t len = utf8::length(text_);
  if (!(span_.start < span_.end && span_.end <= len)) {
    throw Error("invalid span [" + std::to_string(span_.start) + "," +
                std::to_string(span_.end) + ") for text of length " +
                std::to_string(len));
  }
  const std::string marked = span_text();
  if (text::is_space(marked.front()) || text::is_space(marked.back())) {
    throw Error("marked span '" + marked + "' has surrounding whitespace");
  }
}

std::string MarkedHead::span_text() const {
  return utf8::substr(text_, span_.start, span_.end);
}

std::string MarkedHead::prefix() const {
  return text_.substr(0, utf8::byte_offset(text_, span_.start));
}

std::string MarkedHead::suffix() const {
  return text_.substr(utf8::byte_offset(text_, span_.end));
}

MarkedHead MarkedHead::with_kind(SpanKind kind) const {
  return MarkedHead(text_, span_, kind);
}

MarkedHead mark_span(std::string_view bracketed, SpanKind kind) {
  const auto open = bracketed.find('[');
  const auto close = bracketed.find(']');
  if (open == std::string_view::npos || close == std::string_view::npos) {
    throw Error("no bracketed span in '" + std::string(bracketed) + "'");
  }
  if (bracketed.find('[', open + 1) != std::string_view::npos ||
      bracketed.find(']', close + 1) != std::string_view::npos) {
    throw Error("multiple bracketed spans in '" + std::string(bracketed) + "'");
  }
  if (close < open) {
    throw Error("mismatched brackets in '" + std::string(bracketed) + "'");
  }
  if (close == open + 1) {
    throw Error("empty bracketed span in '" + std::string(bracketed) + "'");
  }
  const std::string_view before = bracketed.substr(0, open);
  const std::string_view inside = bracketed.substr(open + 1, close - open - 1);
  const std::string_view after = bracketed.substr(close + 1);
  const std::size_t start = utf8::length(before);
  const std::size_t end = start + utf8::length(inside);
  std::string plain;
  plain.reserve(bracketed.size() - 2);
  plain.append(before).append(inside).append(after);
  return MarkedHead(std::move(plain), Span{start, end}, kind);
}

MarkedHead mark_span(std::string_view head, std::string_view bracketed,
                     SpanKind kind) {
  MarkedHead h = mark_span(bracketed, kind);
  if (h.text() != head) {
    throw Error("bracketed head '" + std::string(bracketed) +
                "' does not match head '" + std::string(head) + "'");
  }
  return h;
}

std::string render_bracketed(const MarkedHead& h) {
  return h.prefix() + "[" + h.span_text() + "]" + h.suffix();
}

MarkedHead replace_span(const MarkedHead& h, std::string_view replacement,
                        SpanKind kind) {
  const std::string_view inserted = text::trim(replacement);
  if (inserted.empty()) throw Error("replacement text is empty");
  const std::string prefix = h.prefix();
  const std::size_t start = h.span().start;
  const std::size_t end = start + utf8::length(inserted);
  std::string out = prefix;
  out.append(inserted).append(h.suffix());
  return MarkedHead(std::move(out), Span{start, end}, kind);
}

MarkedHead conceptualize_head(const MarkedHead& h, std::string_view concept_text) {
  if (text::trim(concept_text).empty()) throw Error("concept is empty");
  return replace_span(h, concept_text, SpanKind::kConcept);
}

std::string instantiate_head(const MarkedHead& abstract_head,
                             std::string_view instance) {
  if (text::trim(instance).empty()) throw Error("instance is empty");
  return replace_span(abstract_head, instance, SpanKind::kInstance).text();
}

}  // namespace cskd

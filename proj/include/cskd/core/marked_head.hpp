#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cskd {

enum class SpanKind { kInstance, kConcept };

std::string_view to_string(SpanKind k);

// Half-open interval of Unicode scalar values.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// A head event with one marked focus span: the instance being abstracted,
// or the concept that replaced it.
class MarkedHead {
 public:
  // Validates 0 <= start < end <= length(text) and that the marked text has
  // no surrounding whitespace. Throws cskd::Error otherwise.
  MarkedHead(std::string text, Span span, SpanKind kind);

  const std::string& text() const { return text_; }
  Span span() const { return span_; }
  SpanKind kind() const { return kind_; }

  std::string span_text() const;
  std::string prefix() const;
  std::string suffix() const;

  // Same text and span, different kind (e.g. re-marking an inserted concept
  // before instantiating it).
  MarkedHead with_kind(SpanKind kind) const;

  friend bool operator==(const MarkedHead&, const MarkedHead&) = default;

 private:
  std::string text_;
  Span span_;
  SpanKind kind_;
};

// Parses "PersonX enjoys drinking in the [bar]". Exactly one bracket pair
// with non-empty, whitespace-free-edged content is required.
MarkedHead mark_span(std::string_view bracketed,
                     SpanKind kind = SpanKind::kInstance);

// As above, additionally checking that removing the brackets yields `head`.
MarkedHead mark_span(std::string_view head, std::string_view bracketed,
                     SpanKind kind = SpanKind::kInstance);

// Inverse of mark_span.
std::string render_bracketed(const MarkedHead& h);

// Replaces the marked span with `replacement` (trimmed) and marks the
// inserted text. Throws on an empty replacement.
MarkedHead replace_span(const MarkedHead& h, std::string_view replacement,
                        SpanKind kind);

// h_o, i -> c  yields h_a with the concept marked.
MarkedHead conceptualize_head(const MarkedHead& h, std::string_view concept_text);

// h_a, c -> i' yields h_{i'}.
std::string instantiate_head(const MarkedHead& abstract_head,
                             std::string_view instance);

}  // namespace cskd

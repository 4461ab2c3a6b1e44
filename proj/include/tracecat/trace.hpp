#pragma once

// Trace monoids M(E, I), their elements in lexicographic normal form, and
// basic homomorphisms (generators go to generators or to the identity).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracecat/error.hpp"

namespace tracecat {

using EventId = std::uint32_t;

/// Reserved event id. As the image of a basic homomorphism it stands for the
/// identity trace; in pointed event sets it is the basepoint `*`.
inline constexpr EventId kEmpty = std::numeric_limits<EventId>::max();

using Word = std::vector<EventId>;
using EventPair = std::pair<EventId, EventId>;

class TraceMonoid {
  struct Impl {
    std::vector<std::string> events;
    std::unordered_map<std::string, EventId> index;
    std::vector<std::uint8_t> independence;  // row-major |E| x |E|
  };

 public:
  /// The trivial monoid M(∅, ∅).
  TraceMonoid() : impl_(std::make_shared<const Impl>()) {}

  /// Builds M(E, I) from an ordered alphabet and unordered independent pairs.
  /// The symmetric closure of `independence` is taken.
  static TraceMonoid make(std::vector<std::string> events, std::span<const EventPair> independence) {
    auto impl = std::make_shared<Impl>();
    for (EventId i = 0; i < events.size(); ++i) {
      validate_name(events[i]);
      if (!impl->index.emplace(events[i], i).second) {
        throw Error(ErrorCode::duplicate_event, "event '" + events[i] + "' declared twice");
      }
    }
    const std::size_t n = events.size();
    impl->independence.assign(n * n, 0);
    for (auto [a, b] : independence) {
      if (a >= n || b >= n) throw Error(ErrorCode::unknown_event, "independent pair refers to an undeclared event");
      if (a == b) throw Error(ErrorCode::reflexive_pair, "(" + events[a] + "," + events[a] + ") cannot be independent");
      impl->independence[a * n + b] = 1;
      impl->independence[b * n + a] = 1;
    }
    impl->events = std::move(events);
    return TraceMonoid(std::move(impl));
  }

  static TraceMonoid make(std::vector<std::string> events,
                          std::span<const std::pair<std::string, std::string>> independence) {
    std::unordered_map<std::string, EventId> index;
    for (EventId i = 0; i < events.size(); ++i) index.emplace(events[i], i);
    std::vector<EventPair> pairs;
    pairs.reserve(independence.size());
    for (const auto& [a, b] : independence) {
      auto ia = index.find(a);
      auto ib = index.find(b);
      if (ia == index.end()) throw Error(ErrorCode::unknown_event, "'" + a + "' is not in the alphabet");
      if (ib == index.end()) throw Error(ErrorCode::unknown_event, "'" + b + "' is not in the alphabet");
      pairs.emplace_back(ia->second, ib->second);
    }
    return make(std::move(events), pairs);
  }

  std::size_t size() const { return impl_->events.size(); }
  bool empty() const { return impl_->events.empty(); }
  const std::vector<std::string>& events() const { return impl_->events; }

  const std::string& name(EventId e) const { return impl_->events.at(e); }

  std::optional<EventId> find(std::string_view name) const {
    auto it = impl_->index.find(std::string(name));
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
  }

  EventId id(std::string_view name) const {
    if (auto e = find(name)) return *e;
    throw Error(ErrorCode::unknown_event, "'" + std::string(name) + "' is not in the alphabet");
  }

  bool independent(EventId a, EventId b) const {
    const std::size_t n = size();
    return a < n && b < n && impl_->independence[a * n + b] != 0;
  }

  /// Unordered independent pairs as (a, b) with a < b, in alphabet order.
  std::vector<EventPair> independent_pairs() const {
    std::vector<EventPair> out;
    for (EventId a = 0; a < size(); ++a)
      for (EventId b = a + 1; b < size(); ++b)
        if (independent(a, b)) out.emplace_back(a, b);
    return out;
  }

  Word word(std::span<const std::string> letters) const {
    Word w;
    w.reserve(letters.size());
    for (const auto& l : letters) w.push_back(id(l));
    return w;
  }

  /// Reads a word written as whitespace-separated event names. A token that
  /// is not an event name but consists of single-character event names is
  /// split into letters, so "adecc" works over a one-letter alphabet. The
  /// token "1" denotes the empty word unless "1" is itself an event.
  Word parse_word(std::string_view text) const {
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) break;
      std::string_view token = text.substr(i, j - i);
      if (auto e = find(token)) {
        w.push_back(*e);
      } else if (token == "1") {
      } else {
        for (char c : token) w.push_back(id(std::string_view(&c, 1)));
      }
      i = j;
    }
    return w;
  }

  std::string render(std::span<const EventId> w) const {
    if (w.empty()) return "1";
    const bool compact =
        std::all_of(impl_->events.begin(), impl_->events.end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i > 0) out += ' ';
      out += name(w[i]);
    }
    return out;
  }

  friend bool operator==(const TraceMonoid& a, const TraceMonoid& b) {
    return a.impl_ == b.impl_ ||
           (a.impl_->events == b.impl_->events && a.impl_->independence == b.impl_->independence);
  }

  static void validate_name(const std::string& name) {
    if (name.empty() || name == "*" ||
        std::any_of(name.begin(), name.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorCode::invalid_name, "'" + name + "' is not a usable name");
    }
  }

 private:
  explicit TraceMonoid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

inline TraceMonoid make_monoid(std::vector<std::string> events,
                               std::span<const std::pair<std::string, std::string>> independence) {
  return TraceMonoid::make(std::move(events), independence);
}

namespace detail {

inline void check_word(const TraceMonoid& m, std::span<const EventId> w) {
  for (EventId e : w)
    if (e >= m.size()) throw Error(ErrorCode::unknown_event, "word letter outside the alphabet");
}

// Lexicographically least word in the class of w. A letter can be moved to
// the front iff it is independent of every letter before it; taking the
// least such letter at each step yields the least representative.
inline Word lex_normal_form(const TraceMonoid& m, std::span<const EventId> w) {
  Word rest(w.begin(), w.end());
  Word out;
  out.reserve(rest.size());
  std::vector<std::uint8_t> seen(m.size());
  while (!rest.empty()) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t best = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const EventId c = rest[i];
      if (!seen[c]) {
        bool free = true;
        for (std::size_t j = 0; j < i && free; ++j) free = m.independent(rest[j], c);
        if (free && (best == rest.size() || c < rest[best])) best = i;
        seen[c] = 1;
      }
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace detail

/// An element of M(E, I), held as the lexicographically least word of its
/// class under the alphabet's declared order.
class Trace {
 public:
  explicit Trace(TraceMonoid monoid) : monoid_(std::move(monoid)) {}

  Trace(TraceMonoid monoid, std::span<const EventId> w) : monoid_(std::move(monoid)) {
    detail::check_word(monoid_, w);
    word_ = detail::lex_normal_form(monoid_, w);
  }

  const TraceMonoid& monoid() const { return monoid_; }
  const Word& word() const { return word_; }
  std::size_t length() const { return word_.size(); }
  bool empty() const { return word_.empty(); }
  std::string str() const { return monoid_.render(word_); }

  friend bool operator==(const Trace& a, const Trace& b) { return a.word_ == b.word_ && a.monoid_ == b.monoid_; }

 private:
  TraceMonoid monoid_;
  Word word_;
};

inline Trace normalize(const TraceMonoid& m, std::span<const EventId> w) { return Trace(m, w); }

inline bool equivalent(const TraceMonoid& m, std::span<const EventId> w1, std::span<const EventId> w2) {
  if (w1.size() != w2.size()) {
    detail::check_word(m, w1);
    detail::check_word(m, w2);
    return false;
  }
  return normalize(m, w1).word() == normalize(m, w2).word();
}

inline Trace concat(const Trace& t1, const Trace& t2) {
  if (!(t1.monoid() == t2.monoid()))
    throw Error(ErrorCode::monoid_mismatch, "cannot concatenate traces of different monoids");
  Word w = t1.word();
  w.insert(w.end(), t2.word().begin(), t2.word().end());
  return Trace(t1.monoid(), w);
}

inline std::size_t length(const Trace& t) { return t.length(); }

/// Homomorphism M(E, I) -> M(E', I') determined by generator images in
/// E' ∪ {1}; `kEmpty` encodes the identity.
class BasicHom {
 public:
  BasicHom() = default;

  /// Validated construction; throws InvalidHom naming the first independent
  /// pair whose images do not commute.
  static BasicHom make(TraceMonoid source, TraceMonoid target, std::vector<EventId> image) {
    BasicHom h = unchecked(std::move(source), std::move(target), std::move(image));
    auto bad = h.violations();
    if (!bad.empty()) {
      const auto [a, b] = bad.front();
      throw Error(ErrorCode::invalid_hom, "independent pair (" + h.source_.name(a) + "," + h.source_.name(b) +
                                              ") maps to a non-commuting pair");
    }
    return h;
  }

  static BasicHom make(TraceMonoid source, TraceMonoid target,
                       const std::map<std::string, std::optional<std::string>>& image) {
    std::vector<EventId> ids(source.size(), kEmpty);
    std::vector<bool> given(source.size(), false);
    for (const auto& [from, to] : image) {
      EventId e = source.id(from);
      ids[e] = to ? target.id(*to) : kEmpty;
      given[e] = true;
    }
    for (EventId e = 0; e < source.size(); ++e)
      if (!given[e]) throw Error(ErrorCode::invalid_hom, "no image given for '" + source.name(e) + "'");
    return make(std::move(source), std::move(target), std::move(ids));
  }

  /// Shape-checked but not validity-checked; used by checkers that report
  /// violations instead of throwing.
  static BasicHom unchecked(TraceMonoid source, TraceMonoid target, std::vector<EventId> image) {
    if (image.size() != source.size())
      throw Error(ErrorCode::invalid_hom, "image must be total on the source alphabet");
    for (EventId v : image)
      if (v != kEmpty && v >= target.size()) throw Error(ErrorCode::unknown_event, "image outside target alphabet");
    BasicHom h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.image_ = std::move(image);
    return h;
  }

  static BasicHom identity(const TraceMonoid& m) {
    std::vector<EventId> ids(m.size());
    for (EventId e = 0; e < m.size(); ++e) ids[e] = e;
    return unchecked(m, m, std::move(ids));
  }

  const TraceMonoid& source() const { return source_; }
  const TraceMonoid& target() const { return target_; }
  const std::vector<EventId>& image() const { return image_; }
  EventId operator()(EventId e) const { return image_.at(e); }

  /// Independent source pairs whose images fail to commute in the target.
  std::vector<EventPair> violations() const {
    std::vector<EventPair> out;
    for (auto [a, b] : source_.independent_pairs()) {
      const EventId fa = image_[a], fb = image_[b];
      if (fa == kEmpty || fb == kEmpty || fa == fb || target_.independent(fa, fb)) continue;
      out.emplace_back(a, b);
    }
    return out;
  }

  bool is_valid() const { return violations().empty(); }

  friend bool operator==(const BasicHom& a, const BasicHom& b) {
    return a.image_ == b.image_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  TraceMonoid source_;
  TraceMonoid target_;
  std::vector<EventId> image_;
};

inline BasicHom make_hom(TraceMonoid source, TraceMonoid target, std::vector<EventId> image) {
  return BasicHom::make(std::move(source), std::move(target), std::move(image));
}

inline Trace apply(const BasicHom& h, const Trace& t) {
  if (!(t.monoid() == h.source())) throw Error(ErrorCode::monoid_mismatch, "trace is not over the source monoid");
  Word w;
  w.reserve(t.length());
  for (EventId e : t.word())
    if (EventId f = h(e); f != kEmpty) w.push_back(f);
  return Trace(h.target(), w);
}

/// Independent events never share a nonempty image.
inline bool is_independence_preserving(const BasicHom& h) {
  for (auto [a, b] : h.source().independent_pairs())
    if (h(a) != kEmpty && h(a) == h(b)) return false;
  return true;
}

/// h2 ∘ h1.
inline BasicHom compose(const BasicHom& h2, const BasicHom& h1) {
  if (!(h1.target() == h2.source())) throw Error(ErrorCode::monoid_mismatch, "homomorphisms are not composable");
  std::vector<EventId> ids(h1.source().size());
  for (EventId e = 0; e < ids.size(); ++e) ids[e] = h1(e) == kEmpty ? kEmpty : h2(h1(e));
  return BasicHom::unchecked(h1.source(), h2.target(), std::move(ids));
}

}  // namespace tracecat

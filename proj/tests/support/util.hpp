#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <catch_amalgamated.hpp>

#include "tracecat/tracecat.hpp"

namespace tracecat::testing {

inline TraceMonoid monoid(std::vector<std::string> events, std::vector<std::pair<std::string, std::string>> pairs) {
  return TraceMonoid::make(std::move(events), std::span<const std::pair<std::string, std::string>>(pairs));
}

inline TraceMonoid five_events() {
  return monoid({"a", "b", "c", "d", "e"}, {{"e", "a"}, {"e", "d"}, {"e", "c"}, {"c", "b"}, {"c", "d"}});
}

inline BasicHom hom(const TraceMonoid& s, const TraceMonoid& t,
                    const std::map<std::string, std::optional<std::string>>& image) {
  return BasicHom::make(s, t, image);
}

struct HasCode : Catch::Matchers::MatcherGenericBase {
  explicit HasCode(ErrorCode c) : code(c) {}
  bool match(const Error& e) const { return e.code() == code; }
  std::string describe() const override { return "has code " + std::string(error_code_name(code)); }
  ErrorCode code;
};

}  // namespace tracecat::testing

#include "bcnm/heuristics.hpp"

namespace bcnm {

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  if (name == "plain") return Heuristic::plain;
  if (name == "he") return Heuristic::he;
  if (name == "he-prime") return Heuristic::he_prime;
  if (name == "hn" || name == "ne") return Heuristic::hn;
  return std::nullopt;
}

std::string_view to_string(Heuristic h) {
  switch (h) {
    case Heuristic::plain:
      return "plain";
    case Heuristic::he:
      return "he";
    case Heuristic::he_prime:
      return "he-prime";
    case Heuristic::hn:
      return "hn";
  }
  return "?";
}

}  // namespace bcnm

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlmine/domain.hpp"

namespace adlmine {

class MiningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrequentItemset {
  std::vector<std::string> items;  // sorted
  std::size_t count = 0;
  double support = 0.0;  // count / transaction_count, rounded only here

  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

struct FrequentItemsets {
  std::size_t transaction_count = 0;
  // Ordered by size, then lexicographically by item names.
  std::vector<FrequentItemset> itemsets;

  // Exact count of an itemset, if frequent.
  std::optional<std::size_t> count_of(const std::vector<std::string>& sorted_items) const;
};

struct AprioriOptions {
  unsigned jobs = 1;
  // Abort instead of generating more candidates than this in one level.
  std::size_t max_candidates = std::size_t{1} << 20;
};

// count/total >= threshold, evaluated so that a decimal threshold such as 0.15
// accepts 3 of 20 exactly.
bool meets_threshold(std::size_t count, std::size_t total, double threshold);

// Level-wise Apriori (join, prune, hashed counting). Returns every itemset whose
// support meets min_support. Output is independent of transaction order, item
// order, and `jobs`. Throws MiningError on an empty transaction list or when the
// candidate cap is exceeded.
FrequentItemsets frequent_itemsets(std::span<const ItemSet> transactions, double min_support,
                                   const AprioriOptions& options = {});

// Class-association rules X -> label for every frequent itemset containing the
// label. Confidence = count(X + label) / count(X); rules below min_confidence are
// dropped. With `minimal_antecedents`, a rule is also dropped when a strict
// subset of its antecedent reaches at least the same confidence.
std::vector<Rule> generate_rules(const FrequentItemsets& frequent, AdlKind adl, double min_confidence,
                                 bool minimal_antecedents, Minutes window_size);

}  // namespace adlmine

#include "adlmine/apriori.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace adlmine {
namespace {

using ItemId = std::uint32_t;
using Itemset = std::vector<ItemId>;

struct ItemsetHash {
  std::size_t operator()(const Itemset& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto id : s) {
      h ^= id;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Join step: pairs of (k-1)-itemsets sharing their first k-2 items.
// Prune step: every (k-1)-subset of a candidate must itself be frequent.
std::vector<Itemset> next_candidates(const std::vector<Itemset>& frequent, std::size_t cap) {
  std::unordered_set<Itemset, ItemsetHash> known(frequent.begin(), frequent.end());
  std::vector<Itemset> out;
  const std::size_t k1 = frequent.empty() ? 0 : frequent.front().size();
  for (std::size_t i = 0; i < frequent.size(); ++i) {
    for (std::size_t j = i + 1; j < frequent.size(); ++j) {
      const auto& a = frequent[i];
      const auto& b = frequent[j];
      if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;  // sorted input: prefix groups are contiguous
      Itemset cand = a;
      cand.push_back(b.back());
      bool ok = true;
      Itemset sub(k1);
      for (std::size_t drop = 0; drop + 2 < cand.size() && ok; ++drop) {
        std::size_t w = 0;
        for (std::size_t r = 0; r < cand.size(); ++r)
          if (r != drop) sub[w++] = cand[r];
        ok = known.contains(sub);
      }
      if (!ok) continue;
      out.push_back(std::move(cand));
      if (out.size() > cap)
        throw MiningError("Apriori candidate cap exceeded (" + std::to_string(cap) +
                          " candidates); raise min_support or reduce the item universe");
    }
  }
  return out;
}

// Enumerates k-subsets of a sorted transaction and bumps matching candidates.
void count_subsets(const Itemset& t, std::size_t k,
                   const std::unordered_map<Itemset, std::size_t, ItemsetHash>& index,
                   std::vector<std::size_t>& counts) {
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  Itemset probe(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) probe[i] = t[pos[i]];
    if (auto it = index.find(probe); it != index.end()) ++counts[it->second];
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == t.size() - k + (i - 1)) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::vector<std::size_t> count_candidates(const std::vector<Itemset>& transactions,
                                          const std::vector<Itemset>& candidates, unsigned jobs) {
  const std::size_t k = candidates.front().size();
  std::unordered_map<Itemset, std::size_t, ItemsetHash> index;
  index.reserve(candidates.size() * 2);
  for (std::size_t i = 0; i < candidates.size(); ++i) index.emplace(candidates[i], i);

  auto work = [&](std::size_t begin, std::size_t end, std::vector<std::size_t>& counts) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto& tx = transactions[t];
      if (tx.size() < k) continue;
      if (binomial(tx.size(), k) <= static_cast<double>(candidates.size())) {
        count_subsets(tx, k, index, counts);
      } else {
        for (std::size_t c = 0; c < candidates.size(); ++c)
          if (std::includes(tx.begin(), tx.end(), candidates[c].begin(), candidates[c].end())) ++counts[c];
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, transactions.size()));
  std::vector<std::vector<std::size_t>> partial(workers, std::vector<std::size_t>(candidates.size(), 0));
  if (workers == 1) {
    work(0, transactions.size(), partial[0]);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (transactions.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(transactions.size(), w * chunk);
      const std::size_t end = std::min(transactions.size(), begin + chunk);
      threads.emplace_back(work, begin, end, std::ref(partial[w]));
    }
    for (auto& th : threads) th.join();
  }
  std::vector<std::size_t> total(candidates.size(), 0);
  for (const auto& p : partial)
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += p[c];
  return total;
}

}  // namespace

bool meets_threshold(std::size_t count, std::size_t total, double threshold) {
  return total != 0 && static_cast<double>(count) / static_cast<double>(total) >= threshold;
}

std::optional<std::size_t> FrequentItemsets::count_of(const std::vector<std::string>& sorted_items) const {
  const auto it = std::lower_bound(itemsets.begin(), itemsets.end(), sorted_items,
                                   [](const FrequentItemset& f, const std::vector<std::string>& key) {
                                     if (f.items.size() != key.size()) return f.items.size() < key.size();
                                     return f.items < key;
                                   });
  if (it == itemsets.end() || it->items != sorted_items) return std::nullopt;
  return it->count;
}

FrequentItemsets frequent_itemsets(std::span<const ItemSet> transactions, double min_support,
                                   const AprioriOptions& options) {
  if (transactions.empty()) throw MiningError("frequent_itemsets needs at least one transaction");
  if (!(min_support > 0.0 && min_support <= 1.0)) throw MiningError("min_support must be in (0,1]");

  // Item ids follow lexicographic name order, so id order == name order.
  std::map<std::string, ItemId> vocabulary;
  for (const auto& t : transactions)
    for (const auto& item : t) vocabulary.emplace(item, 0);
  std::vector<std::string> names;
  names.reserve(vocabulary.size());
  for (auto& [name, id] : vocabulary) {
    id = static_cast<ItemId>(names.size());
    names.push_back(name);
  }

  std::vector<Itemset> encoded;
  encoded.reserve(transactions.size());
  for (const auto& t : transactions) {
    Itemset e;
    e.reserve(t.size());
    for (const auto& item : t) e.push_back(vocabulary.at(item));
    encoded.push_back(std::move(e));  // std::set iteration keeps ids sorted
  }

  const std::size_t n = transactions.size();
  FrequentItemsets out;
  out.transaction_count = n;
  auto emit = [&](const Itemset& s, std::size_t count) {
    FrequentItemset f;
    for (auto id : s) f.items.push_back(names[id]);
    f.count = count;
    f.support = static_cast<double>(count) / static_cast<double>(n);
    out.itemsets.push_back(std::move(f));
  };

  std::vector<std::size_t> singles(names.size(), 0);
  for (const auto& t : encoded)
    for (auto id : t) ++singles[id];
  std::vector<Itemset> level;
  for (ItemId id = 0; id < names.size(); ++id) {
    if (meets_threshold(singles[id], n, min_support)) {
      level.push_back({id});
      emit(level.back(), singles[id]);
    }
  }

  while (level.size() > 1) {
    auto candidates = next_candidates(level, options.max_candidates);
    if (candidates.empty()) break;
    const auto counts = count_candidates(encoded, candidates, options.jobs);
    std::vector<Itemset> next;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!meets_threshold(counts[c], n, min_support)) continue;
      emit(candidates[c], counts[c]);
      next.push_back(std::move(candidates[c]));
    }
    level = std::move(next);
  }
  return out;
}

std::vector<Rule> generate_rules(const FrequentItemsets& frequent, AdlKind adl, double min_confidence,
                                 bool minimal_antecedents, Minutes window_size) {
  const auto label = label_item(adl);
  struct Candidate {
    std::vector<std::string> antecedent;
    std::size_t joint = 0;       // count(X + label)
    std::size_t antecedent_count = 0;  // count(X)
  };
  std::vector<Candidate> candidates;
  for (const auto& f : frequent.itemsets) {
    if (f.items.size() < 2) continue;
    if (!std::binary_search(f.items.begin(), f.items.end(), label)) continue;
    Candidate c;
    for (const auto& item : f.items)
      if (item != label) c.antecedent.push_back(item);
    const auto base = frequent.count_of(c.antecedent);
    if (!base) throw MiningError("frequent itemset without frequent antecedent; input is not downward closed");
    c.joint = f.count;
    c.antecedent_count = *base;
    candidates.push_back(std::move(c));
  }

  // conf(a) >= conf(b) without division: joint_a * count_b >= joint_b * count_a
  __extension__ using u128 = unsigned __int128;
  auto at_least_as_confident = [](const Candidate& a, const Candidate& b) {
    return static_cast<u128>(a.joint) * b.antecedent_count >= static_cast<u128>(b.joint) * a.antecedent_count;
  };

  std::map<std::vector<std::string>, const Candidate*> by_antecedent;
  for (const auto& c : candidates) by_antecedent.emplace(c.antecedent, &c);

  std::vector<Rule> rules;
  for (const auto& c : candidates) {
    if (!meets_threshold(c.joint, c.antecedent_count, min_confidence)) continue;
    if (minimal_antecedents && c.antecedent.size() > 1) {
      bool dominated = false;
      const std::size_t m = c.antecedent.size();
      for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m) && !dominated; ++mask) {
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < m; ++i)
          if (mask & (std::uint64_t{1} << i)) sub.push_back(c.antecedent[i]);
        const auto it = by_antecedent.find(sub);
        dominated = it != by_antecedent.end() && at_least_as_confident(*it->second, c);
      }
      if (dominated) continue;
    }
    Rule r;
    r.adl = adl;
    r.antecedent = ItemSet(c.antecedent.begin(), c.antecedent.end());
    r.support = static_cast<double>(c.joint) / static_cast<double>(frequent.transaction_count);
    r.confidence = static_cast<double>(c.joint) / static_cast<double>(c.antecedent_count);
    r.window_size = window_size;
    r.id = rule_id(adl, r.antecedent);
    rules.push_back(std::move(r));
  }
  std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    if (a.antecedent.size() != b.antecedent.size()) return a.antecedent.size() < b.antecedent.size();
    return a.antecedent < b.antecedent;
  });
  return rules;
}

}  // namespace adlmine

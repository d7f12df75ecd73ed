#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "syncat/errors.hpp"
#include "syncat/partition.hpp"
#include "syncat/vocabulary.hpp"

namespace syncat {

struct word_tag {};
struct category_tag {};

/// A stochastic language: a sparse probability distribution over fixed-length
/// id sequences. The tag parameter keeps word-sequence languages and
/// category-sequence languages (projections) apart at the type level.
///
/// Invariants: every key has length n, every stored probability is positive,
/// and the probabilities sum to 1 within kMassTolerance. Entries with zero
/// mass are dropped on construction; negative mass is rejected.
template <typename Tag>
class SequenceDistribution {
public:
    using sequence = std::vector<std::uint32_t>;
    using entry_map = std::map<sequence, double>;

    SequenceDistribution(int n, entry_map entries) : n_(n) {
        if (n_ < 1) throw validation_error("sequence length must be >= 1");
        double sum = 0.0;
        for (const auto& [seq, p] : entries) {
            if (static_cast<int>(seq.size()) != n_)
                throw validation_error("sequence of length " + std::to_string(seq.size()) +
                                       " in a language of length " + std::to_string(n_));
            if (p < -kMassTolerance) throw validation_error("negative sequence probability");
            if (p <= 0.0) continue;
            entries_.emplace(seq, p);
            sum += p;
        }
        if (entries_.empty()) throw validation_error("language has empty support");
        if (std::fabs(sum - 1.0) > kMassTolerance)
            throw validation_error("sequence probabilities sum to " + std::to_string(sum) +
                                   ", expected 1");
    }

    int n() const { return n_; }
    const entry_map& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }

    /// Largest id referenced anywhere in the support, plus one.
    std::uint32_t id_bound() const {
        std::uint32_t bound = 0;
        for (const auto& [seq, p] : entries_)
            for (auto v : seq) bound = std::max(bound, v + 1);
        return bound;
    }

    friend bool operator==(const SequenceDistribution&, const SequenceDistribution&) = default;

private:
    int n_;
    entry_map entries_;
};

using StochasticLanguage = SequenceDistribution<word_tag>;
using CategoryLanguage = SequenceDistribution<category_tag>;

/// Largest absolute probability difference between two distributions over the
/// union of their supports; infinity if the sequence lengths differ.
template <typename Tag>
double max_entry_delta(const SequenceDistribution<Tag>& a, const SequenceDistribution<Tag>& b) {
    if (a.n() != b.n()) return std::numeric_limits<double>::infinity();
    double delta = 0.0;
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->first < ib->first)) {
            delta = std::max(delta, std::fabs(ia->second));
            ++ia;
        } else if (ia == a.entries().end() || ib->first < ia->first) {
            delta = std::max(delta, std::fabs(ib->second));
            ++ib;
        } else {
            delta = std::max(delta, std::fabs(ia->second - ib->second));
            ++ia;
            ++ib;
        }
    }
    return delta;
}

/// Pushes a language through a partition: the exact distribution over category
/// sequences obtained by summing, for every supported word sequence, the outer
/// product of the per-position membership distributions scaled by the sequence
/// probability. Sparse throughout; accumulation order is fixed (sorted maps)
/// so results are bit-stable across runs.
inline CategoryLanguage project(const StochasticLanguage& language, const Partition& partition) {
    CategoryLanguage::entry_map out;
    std::vector<std::pair<CategoryLanguage::sequence, double>> acc, next;
    for (const auto& [seq, p] : language.entries()) {
        acc.clear();
        acc.push_back({{}, p});
        for (auto word : seq) {
            if (word >= partition.word_count())
                throw validation_error("partition does not cover word id " + std::to_string(word));
            next.clear();
            for (const auto& [prefix, q] : acc) {
                for (const auto& e : partition.membership(word)) {
                    auto key = prefix;
                    key.push_back(e.category);
                    next.push_back({std::move(key), q * e.mass});
                }
            }
            acc.swap(next);
        }
        for (auto& [key, q] : acc) out[key] += q;
    }
    return CategoryLanguage(language.n(), std::move(out));
}

namespace detail {

/// Number of distinct arrangements of a sorted id multiset: n! / prod(m_i!).
inline double distinct_permutation_count(const std::vector<std::uint32_t>& sorted_seq) {
    double count = 1.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted_seq.size(); ++i) {
        count *= static_cast<double>(i);
        if (i < sorted_seq.size() && sorted_seq[i] == sorted_seq[i - 1]) {
            ++run;
            count /= static_cast<double>(run);
        } else {
            run = 1;
        }
    }
    return count;
}

} // namespace detail

/// The shuffled language: position order destroyed, co-occurrence kept. Every
/// sequence's mass is spread uniformly over the distinct rearrangements of its
/// id multiset, which equals the average over all n! position permutations.
/// The result is permutation-symmetric and shuffle is idempotent.
template <typename Tag>
SequenceDistribution<Tag> shuffle(const SequenceDistribution<Tag>& language) {
    if (language.n() > 10)
        throw resource_error("shuffle of sequences longer than 10 would enumerate too many rearrangements");
    // Group mass by multiset first so each multiset is expanded exactly once.
    std::map<std::vector<std::uint32_t>, double> by_multiset;
    for (const auto& [seq, p] : language.entries()) {
        auto key = seq;
        std::sort(key.begin(), key.end());
        by_multiset[key] += p;
    }
    typename SequenceDistribution<Tag>::entry_map out;
    for (const auto& [sorted_seq, mass] : by_multiset) {
        const double share = mass / detail::distinct_permutation_count(sorted_seq);
        auto perm = sorted_seq;
        do {
            out[perm] += share;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return SequenceDistribution<Tag>(language.n(), std::move(out));
}

/// Positionwise id frequencies: p(v) = (1/n) sum_w p(w) * occurrences(v, w).
template <typename Tag>
std::map<std::uint32_t, double> unigram_marginal(const SequenceDistribution<Tag>& language) {
    std::map<std::uint32_t, double> out;
    const double slot = 1.0 / language.n();
    for (const auto& [seq, p] : language.entries())
        for (auto v : seq) out[v] += p * slot;
    return out;
}

/// A language whose positions are independent and identically distributed:
/// kept in factored form (length + one marginal) because every computation
/// downstream only needs per-position quantities. Materializing all |support|^n
/// sequences is available for small cases and cross-checks.
template <typename Tag>
class ProductLanguage {
public:
    ProductLanguage(int n, std::map<std::uint32_t, double> marginal)
        : n_(n), marginal_(std::move(marginal)) {
        if (n_ < 1) throw validation_error("sequence length must be >= 1");
        double sum = 0.0;
        for (auto it = marginal_.begin(); it != marginal_.end();) {
            if (it->second < -kMassTolerance) throw validation_error("negative marginal probability");
            if (it->second <= 0.0) {
                it = marginal_.erase(it);
                continue;
            }
            sum += it->second;
            ++it;
        }
        if (marginal_.empty()) throw validation_error("empty marginal distribution");
        if (std::fabs(sum - 1.0) > kMassTolerance)
            throw validation_error("marginal probabilities sum to " + std::to_string(sum) +
                                   ", expected 1");
    }

    int n() const { return n_; }
    const std::map<std::uint32_t, double>& marginal() const { return marginal_; }

    /// Expands the factored form into an explicit sequence distribution.
    /// Guarded: |marginal|^n entries are created.
    SequenceDistribution<Tag> materialize(double max_support = 2e6) const {
        const double size = std::pow(static_cast<double>(marginal_.size()), n_);
        if (size > max_support)
            throw resource_error("materializing the product language would create " +
                                 std::to_string(size) + " sequences");
        typename SequenceDistribution<Tag>::entry_map out;
        std::vector<std::pair<std::vector<std::uint32_t>, double>> acc, next;
        acc.push_back({{}, 1.0});
        for (int i = 0; i < n_; ++i) {
            next.clear();
            for (const auto& [prefix, q] : acc) {
                for (const auto& [v, m] : marginal_) {
                    auto key = prefix;
                    key.push_back(v);
                    next.push_back({std::move(key), q * m});
                }
            }
            acc.swap(next);
        }
        for (auto& [key, q] : acc) out[key] += q;
        return SequenceDistribution<Tag>(n_, std::move(out));
    }

private:
    int n_;
    std::map<std::uint32_t, double> marginal_;
};

/// The unigram-product baseline of a language: i.i.d. positions drawn from the
/// unigram marginal. Destroys both order and co-occurrence information.
inline ProductLanguage<word_tag> unigram_product(const StochasticLanguage& language) {
    return ProductLanguage<word_tag>(language.n(), unigram_marginal(language));
}

/// Projecting a factored i.i.d. language through a partition yields another
/// factored i.i.d. language whose marginal is the pushed-forward category
/// marginal q(c) = sum_v p(v) * membership_v(c).
inline ProductLanguage<category_tag> project(const ProductLanguage<word_tag>& language,
                                             const Partition& partition) {
    std::map<std::uint32_t, double> out;
    for (const auto& [word, p] : language.marginal()) {
        if (word >= partition.word_count())
            throw validation_error("partition does not cover word id " + std::to_string(word));
        for (const auto& e : partition.membership(word)) out[e.category] += p * e.mass;
    }
    return ProductLanguage<category_tag>(language.n(), std::move(out));
}

} // namespace syncat

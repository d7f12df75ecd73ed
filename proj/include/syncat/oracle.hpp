#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "syncat/errors.hpp"
#include "syncat/language.hpp"
#include "syncat/partition.hpp"
#include "syncat/vocabulary.hpp"

namespace syncat {

/// A language as a plain set of word-id sequences: support only, no
/// probabilities, lengths may vary. This is the exact, non-probabilistic
/// setting in which contextual and syntactic partitions have crisp yes/no
/// definitions; it serves as ground truth for the probabilistic measures on
/// tiny vocabularies.
class FiniteLanguage {
public:
    using sequence = std::vector<word_id>;

    FiniteLanguage(Vocabulary vocabulary, std::set<sequence> sequences)
        : vocabulary_(std::move(vocabulary)), sequences_(std::move(sequences)) {
        if (sequences_.empty()) throw validation_error("finite language has empty support");
        for (const auto& seq : sequences_) {
            if (seq.empty()) throw validation_error("finite language contains an empty sequence");
            for (auto w : seq)
                if (w >= vocabulary_.size())
                    throw validation_error("sequence references word id outside the vocabulary");
        }
    }

    /// The support of a stochastic language, probabilities forgotten.
    static FiniteLanguage support_of(const StochasticLanguage& language,
                                     const Vocabulary& vocabulary) {
        std::set<sequence> sequences;
        for (const auto& [seq, p] : language.entries()) sequences.insert(seq);
        return FiniteLanguage(vocabulary, std::move(sequences));
    }

    const Vocabulary& vocabulary() const { return vocabulary_; }
    const std::set<sequence>& sequences() const { return sequences_; }

    std::size_t max_length() const {
        std::size_t m = 0;
        for (const auto& seq : sequences_) m = std::max(m, seq.size());
        return m;
    }

private:
    Vocabulary vocabulary_;
    std::set<sequence> sequences_;
};

/// All rearrangements of all sequences: the set-semantics shuffled language.
/// A superset of its input and idempotent. Guarded because a length-n
/// sequence has up to n! rearrangements.
inline FiniteLanguage shuffle_closure(const FiniteLanguage& language) {
    if (language.max_length() > 8)
        throw resource_error("shuffle closure of sequences longer than 8 is not enumerable");
    std::set<FiniteLanguage::sequence> out;
    for (const auto& seq : language.sequences()) {
        auto perm = seq;
        std::sort(perm.begin(), perm.end());
        do {
            out.insert(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return FiniteLanguage(language.vocabulary(), std::move(out));
}

namespace detail {

/// Category pattern of one sequence under a deterministic partition.
inline std::vector<category_id> pattern_of(const FiniteLanguage::sequence& seq,
                                           const Partition& partition) {
    std::vector<category_id> out;
    out.reserve(seq.size());
    for (auto w : seq) out.push_back(partition.category_of(w));
    return out;
}

inline void require_exact_inputs(const FiniteLanguage& language, const Partition& partition) {
    if (!partition.deterministic())
        throw validation_error("exact oracle checks require a deterministic partition");
    if (partition.word_count() < language.vocabulary().size())
        throw validation_error("partition does not cover the language's vocabulary");
}

/// The set of category patterns of a sequence set.
inline std::set<std::vector<category_id>> pattern_set(const std::set<FiniteLanguage::sequence>& seqs,
                                                      const Partition& partition) {
    std::set<std::vector<category_id>> out;
    for (const auto& seq : seqs) out.insert(pattern_of(seq, partition));
    return out;
}

} // namespace detail

/// True iff the projected pattern set is unchanged by shuffling, i.e. word
/// order cannot be recovered from category patterns: the partition carries
/// only co-occurrence information.
inline bool is_contextual_exact(const FiniteLanguage& language, const Partition& partition) {
    detail::require_exact_inputs(language, partition);
    const FiniteLanguage closed = shuffle_closure(language);
    return detail::pattern_set(language.sequences(), partition) ==
           detail::pattern_set(closed.sequences(), partition);
}

/// Where pattern preimages live when testing the independence of two
/// partitions: all conceivable sequences over the vocabulary, or only the
/// sequences attested in the language. The vocabulary-wide reading is the
/// primary semantics; the attested variant is exposed for comparison.
enum class PreimageDomain { full_vocabulary, attested_only };

struct IndependenceResult {
    bool independent = false;
    /// On failure, the lexicographically first pattern pair with no common
    /// preimage: (pattern of the first partition, pattern of the second).
    std::optional<std::pair<std::vector<category_id>, std::vector<category_id>>> witness;
};

/// Two partitions are independent when every same-length pair of attested
/// patterns is jointly realizable: some word sequence projects to both at
/// once. Under the full-vocabulary domain that means the category pair at
/// every position shares at least one word; under the attested domain the
/// common preimage must itself be a sequence of the language.
inline IndependenceResult are_independent_exact(const FiniteLanguage& language,
                                                const Partition& first, const Partition& second,
                                                PreimageDomain domain = PreimageDomain::full_vocabulary) {
    detail::require_exact_inputs(language, first);
    detail::require_exact_inputs(language, second);
    const auto first_patterns = detail::pattern_set(language.sequences(), first);
    const auto second_patterns = detail::pattern_set(language.sequences(), second);

    // Per-category word sets for the positionwise intersection test.
    std::vector<std::vector<word_id>> first_words(first.category_count());
    for (category_id c = 0; c < first.category_count(); ++c) first_words[c] = first.words_in(c);
    std::vector<std::vector<word_id>> second_words(second.category_count());
    for (category_id c = 0; c < second.category_count(); ++c) second_words[c] = second.words_in(c);

    std::set<std::pair<std::vector<category_id>, std::vector<category_id>>> attested_pairs;
    if (domain == PreimageDomain::attested_only) {
        for (const auto& seq : language.sequences())
            attested_pairs.insert({detail::pattern_of(seq, first), detail::pattern_of(seq, second)});
    }

    auto intersects = [](const std::vector<word_id>& a, const std::vector<word_id>& b) {
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() && ib != b.end()) {
            if (*ia < *ib) ++ia;
            else if (*ib < *ia) ++ib;
            else return true;
        }
        return false;
    };

    for (const auto& wp : first_patterns) {
        for (const auto& wq : second_patterns) {
            if (wp.size() != wq.size()) continue; // no common preimage is only meaningful at equal length
            bool compatible = true;
            if (domain == PreimageDomain::attested_only) {
                compatible = attested_pairs.count({wp, wq}) > 0;
            } else {
                for (std::size_t i = 0; i < wp.size(); ++i) {
                    if (!intersects(first_words[wp[i]], second_words[wq[i]])) {
                        compatible = false;
                        break;
                    }
                }
            }
            if (!compatible) return {false, std::make_pair(wp, wq)};
        }
    }
    return {true, std::nullopt};
}

/// Streams every set partition of the vocabulary with at most max_categories
/// blocks, each exactly once, via restricted growth strings: word 0 is always
/// in block 0 and word i may open at most one new block. Category labels are
/// "c1", "c2", ... in block order.
class PartitionEnumerator {
public:
    PartitionEnumerator(const Vocabulary& vocabulary, std::size_t max_categories)
        : size_(vocabulary.size()), max_categories_(max_categories) {
        if (size_ == 0) throw validation_error("empty vocabulary");
        if (size_ > 12)
            throw resource_error("set-partition enumeration is guarded at 12 words, got " +
                                 std::to_string(size_));
        if (max_categories_ < 1) throw validation_error("need at least one category");
        rgs_.assign(size_, 0);
    }

    /// The next partition, or nothing when the stream is exhausted.
    std::optional<Partition> next() {
        if (done_) return std::nullopt;
        Partition out = materialize();
        advance();
        return out;
    }

private:
    Partition materialize() const {
        category_id blocks = 0;
        for (auto v : rgs_) blocks = std::max(blocks, v + 1);
        std::vector<std::string> labels;
        labels.reserve(blocks);
        for (category_id c = 0; c < blocks; ++c) labels.push_back("c" + std::to_string(c + 1));
        std::vector<std::vector<CategoryMass>> membership(size_);
        for (std::size_t w = 0; w < size_; ++w) membership[w] = {{rgs_[w], 1.0}};
        return Partition(std::move(labels), std::move(membership));
    }

    void advance() {
        // Increment the rightmost position that can still grow, reset the tail.
        for (std::size_t i = size_; i-- > 1;) {
            category_id prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs_[j]);
            const category_id cap = static_cast<category_id>(
                std::min<std::size_t>(prefix_max + 1, max_categories_ - 1));
            if (rgs_[i] < cap) {
                ++rgs_[i];
                for (std::size_t j = i + 1; j < size_; ++j) rgs_[j] = 0;
                return;
            }
        }
        done_ = true;
    }

    std::size_t size_;
    std::size_t max_categories_;
    std::vector<category_id> rgs_;
    bool done_ = false;
};

/// Exhaustive syntactic ground truth for one finite language: enumerates all
/// set partitions of the vocabulary once, keeps the contextual ones, and
/// answers syntacticity queries by checking independence against each of
/// them. Construction is the expensive step (Bell(|V|) partitions), hence the
/// vocabulary guard.
class SyntacticOracle {
public:
    explicit SyntacticOracle(const FiniteLanguage& language, std::size_t vocab_guard = 10,
                             PreimageDomain domain = PreimageDomain::full_vocabulary)
        : language_(language), domain_(domain) {
        const std::size_t v = language.vocabulary().size();
        if (v > vocab_guard)
            throw resource_error("syntactic oracle is guarded at " + std::to_string(vocab_guard) +
                                 " words, got " + std::to_string(v));
        const FiniteLanguage closed = shuffle_closure(language);
        PartitionEnumerator stream(language.vocabulary(), v);
        while (auto p = stream.next()) {
            if (detail::pattern_set(language.sequences(), *p) ==
                detail::pattern_set(closed.sequences(), *p))
                contextual_.push_back(std::move(*p));
        }
    }

    /// Every deterministic contextual partition of the vocabulary.
    const std::vector<Partition>& contextual_partitions() const { return contextual_; }

    /// True iff the partition is independent of every deterministic contextual
    /// partition of the vocabulary.
    bool is_syntactic(const Partition& partition) const {
        for (const auto& q : contextual_) {
            if (!are_independent_exact(language_, partition, q, domain_).independent) return false;
        }
        return true;
    }

private:
    FiniteLanguage language_;
    PreimageDomain domain_;
    std::vector<Partition> contextual_;
};

/// One-shot syntacticity check; builds the full oracle behind the scenes.
inline bool is_syntactic_exact(const FiniteLanguage& language, const Partition& partition,
                               std::size_t vocab_guard = 10,
                               PreimageDomain domain = PreimageDomain::full_vocabulary) {
    detail::require_exact_inputs(language, partition);
    return SyntacticOracle(language, vocab_guard, domain).is_syntactic(partition);
}

} // namespace syncat

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "syncat/errors.hpp"
#include "syncat/vocabulary.hpp"

namespace syncat {

/// Tolerance for per-word membership mass sums and for the "mass equals one"
/// determinism test. File loaders accept looser input (1e-6) and renormalize
/// before constructing a Partition.
inline constexpr double kMassTolerance = 1e-9;

/// One sparse membership entry: this much probability mass on this category.
struct CategoryMass {
    category_id category = 0;
    double mass = 0.0;

    friend bool operator==(const CategoryMass&, const CategoryMass&) = default;
};

/// A probabilistic partition of a vocabulary: every word carries a probability
/// distribution over a shared list of categories. A partition is deterministic
/// when every word puts mass 1 on a single category, which makes it an
/// ordinary set partition of the vocabulary.
///
/// Values are immutable; every transform returns a new Partition. Categories
/// that end up with zero total mass after a transform are pruned so that
/// downstream sequence enumerations never loop over dead categories.
class Partition {
public:
    /// Validating constructor. `membership[w]` lists word w's category masses;
    /// entries need not be sorted but must reference declared categories,
    /// carry non-negative mass, and sum to 1 within kMassTolerance.
    Partition(std::vector<std::string> labels, std::vector<std::vector<CategoryMass>> membership)
        : labels_(std::move(labels)), membership_(std::move(membership)) {
        if (labels_.empty()) throw validation_error("partition needs at least one category");
        std::set<std::string> seen;
        for (const auto& l : labels_) {
            if (!seen.insert(l).second)
                throw validation_error("duplicate category label: '" + l + "'");
        }
        if (membership_.empty()) throw validation_error("partition over an empty vocabulary");
        for (std::size_t w = 0; w < membership_.size(); ++w) {
            auto& entries = membership_[w];
            std::sort(entries.begin(), entries.end(),
                      [](const CategoryMass& a, const CategoryMass& b) { return a.category < b.category; });
            double sum = 0.0;
            std::vector<CategoryMass> kept;
            kept.reserve(entries.size());
            for (const auto& e : entries) {
                if (e.category >= labels_.size())
                    throw validation_error("membership references undeclared category id");
                if (e.mass < -kMassTolerance)
                    throw validation_error("negative membership mass for word id " + std::to_string(w));
                if (e.mass <= 0.0) continue;
                if (!kept.empty() && kept.back().category == e.category)
                    throw validation_error("duplicate category in membership of word id " + std::to_string(w));
                kept.push_back(e);
                sum += e.mass;
            }
            if (kept.empty() || std::fabs(sum - 1.0) > kMassTolerance)
                throw validation_error("membership of word id " + std::to_string(w) +
                                       " sums to " + std::to_string(sum) + ", expected 1");
            entries = std::move(kept);
        }
    }

    /// One singleton category per word: the finest partition.
    static Partition total(const Vocabulary& vocab) {
        if (vocab.empty()) throw validation_error("empty vocabulary");
        std::vector<std::string> labels;
        std::vector<std::vector<CategoryMass>> membership;
        labels.reserve(vocab.size());
        membership.reserve(vocab.size());
        for (word_id w = 0; w < vocab.size(); ++w) {
            labels.push_back(vocab.word(w));
            membership.push_back({{static_cast<category_id>(w), 1.0}});
        }
        return Partition(std::move(labels), std::move(membership));
    }

    /// One category holding every word: the coarsest partition. Carries no
    /// information about any language and is both contextual and syntactic.
    static Partition trivial(const Vocabulary& vocab) {
        if (vocab.empty()) throw validation_error("empty vocabulary");
        std::vector<std::vector<CategoryMass>> membership(vocab.size(), {{0, 1.0}});
        return Partition({"all"}, std::move(membership));
    }

    std::size_t word_count() const { return membership_.size(); }
    std::size_t category_count() const { return labels_.size(); }

    const std::string& label(category_id c) const {
        if (c >= labels_.size()) throw validation_error("category id out of range");
        return labels_[c];
    }

    const std::vector<std::string>& labels() const { return labels_; }

    /// Finds a category by label.
    std::optional<category_id> find_category(std::string_view label) const {
        for (category_id c = 0; c < labels_.size(); ++c)
            if (labels_[c] == label) return c;
        return std::nullopt;
    }

    category_id require_category(std::string_view label) const {
        auto c = find_category(label);
        if (!c) throw validation_error("unknown category: '" + std::string(label) + "'");
        return *c;
    }

    /// Word w's sparse membership, sorted by category id.
    const std::vector<CategoryMass>& membership(word_id w) const {
        if (w >= membership_.size())
            throw validation_error("partition does not cover word id " + std::to_string(w));
        return membership_[w];
    }

    /// True when every word has a single category with mass 1.
    bool deterministic() const {
        for (const auto& entries : membership_) {
            if (entries.size() != 1 || std::fabs(entries.front().mass - 1.0) > kMassTolerance)
                return false;
        }
        return true;
    }

    /// The single category of word w; only meaningful for deterministic
    /// partitions (raises otherwise).
    category_id category_of(word_id w) const {
        const auto& entries = membership(w);
        if (entries.size() != 1)
            throw validation_error("category_of requires a deterministic partition");
        return entries.front().category;
    }

    /// All word ids with nonzero mass on category c, ascending.
    std::vector<word_id> words_in(category_id c) const {
        std::vector<word_id> out;
        for (word_id w = 0; w < membership_.size(); ++w)
            for (const auto& e : membership_[w])
                if (e.category == c) out.push_back(w);
        return out;
    }

    /// Pointwise product partition: categories are the used pairs (c, c') and
    /// each word's membership is the outer product of its factor memberships.
    /// Marginalizing the projection of the product over either coordinate
    /// recovers the factor projection, which is what makes the mutual
    /// information of two partitions well defined.
    Partition product(const Partition& other) const {
        if (other.word_count() != word_count())
            throw validation_error("product of partitions over different vocabularies");
        // First pass: collect the pairs that actually receive mass.
        std::set<std::pair<category_id, category_id>> used;
        for (word_id w = 0; w < word_count(); ++w)
            for (const auto& a : membership_[w])
                for (const auto& b : other.membership_[w])
                    used.insert({a.category, b.category});
        std::map<std::pair<category_id, category_id>, category_id> pair_ids;
        std::vector<std::string> labels;
        labels.reserve(used.size());
        for (const auto& p : used) {
            pair_ids.emplace(p, static_cast<category_id>(labels.size()));
            labels.push_back("(" + labels_[p.first] + "," + other.labels_[p.second] + ")");
        }
        std::vector<std::vector<CategoryMass>> membership(word_count());
        for (word_id w = 0; w < word_count(); ++w)
            for (const auto& a : membership_[w])
                for (const auto& b : other.membership_[w])
                    membership[w].push_back({pair_ids.at({a.category, b.category}), a.mass * b.mass});
        return Partition(std::move(labels), std::move(membership));
    }

    /// Sums the masses of `group` into a single category labelled `new_label`;
    /// the merged category takes the slot of the smallest grouped id.
    Partition merge_categories(const std::set<category_id>& group, const std::string& new_label) const {
        if (group.size() < 2) throw validation_error("merge needs at least two categories");
        for (category_id c : group)
            if (c >= labels_.size())
                throw validation_error("merge references unknown category id " + std::to_string(c));
        const category_id target = *group.begin();
        std::vector<std::string> labels;
        std::vector<category_id> remap(labels_.size());
        for (category_id c = 0; c < labels_.size(); ++c) {
            if (c == target) {
                remap[c] = static_cast<category_id>(labels.size());
                labels.push_back(new_label);
            } else if (group.count(c)) {
                remap[c] = 0; // patched below once target's id is known
            } else {
                remap[c] = static_cast<category_id>(labels.size());
                labels.push_back(labels_[c]);
            }
        }
        for (category_id c : group) remap[c] = remap[target];
        std::vector<std::vector<CategoryMass>> membership(word_count());
        for (word_id w = 0; w < word_count(); ++w) {
            std::map<category_id, double> acc;
            for (const auto& e : membership_[w]) acc[remap[e.category]] += e.mass;
            for (const auto& [c, m] : acc) membership[w].push_back({c, m});
        }
        return Partition(std::move(labels), std::move(membership)).pruned();
    }

    /// Replaces category `cat` by one category per annotation category; a
    /// word's mass on `cat` is redistributed proportionally to its membership
    /// in the annotation partition (for example a gold topic partition).
    Partition split_by_annotation(category_id cat, const Partition& annotation) const {
        if (cat >= labels_.size())
            throw validation_error("split references unknown category id " + std::to_string(cat));
        if (annotation.word_count() != word_count())
            throw validation_error("annotation partition covers a different vocabulary");
        std::vector<std::string> labels;
        std::vector<category_id> remap(labels_.size());
        category_id first_new = 0;
        for (category_id c = 0; c < labels_.size(); ++c) {
            if (c == cat) {
                first_new = static_cast<category_id>(labels.size());
                for (const auto& al : annotation.labels())
                    labels.push_back(labels_[cat] + "_" + al);
            } else {
                remap[c] = static_cast<category_id>(labels.size());
                labels.push_back(labels_[c]);
            }
        }
        std::vector<std::vector<CategoryMass>> membership(word_count());
        for (word_id w = 0; w < word_count(); ++w) {
            std::map<category_id, double> acc;
            for (const auto& e : membership_[w]) {
                if (e.category == cat) {
                    for (const auto& a : annotation.membership(w))
                        acc[first_new + a.category] += e.mass * a.mass;
                } else {
                    acc[remap[e.category]] += e.mass;
                }
            }
            for (const auto& [c, m] : acc) membership[w].push_back({c, m});
        }
        return Partition(std::move(labels), std::move(membership)).pruned();
    }

    /// Replaces category `cat` by k categories, assigning each word carrying
    /// nonzero `cat`-mass wholly to one of them. The assignment is a fixed
    /// documented procedure so runs are reproducible: words are visited in
    /// ascending id order and `mt19937_64(seed)() % k` picks the bucket.
    Partition split_category_random(category_id cat, std::size_t k, std::uint64_t seed) const {
        if (cat >= labels_.size())
            throw validation_error("split references unknown category id " + std::to_string(cat));
        if (k < 2) throw validation_error("random split needs k >= 2");
        std::vector<std::string> labels;
        std::vector<category_id> remap(labels_.size());
        category_id first_new = 0;
        for (category_id c = 0; c < labels_.size(); ++c) {
            if (c == cat) {
                first_new = static_cast<category_id>(labels.size());
                for (std::size_t i = 1; i <= k; ++i)
                    labels.push_back(labels_[cat] + "_" + std::to_string(i));
            } else {
                remap[c] = static_cast<category_id>(labels.size());
                labels.push_back(labels_[c]);
            }
        }
        std::mt19937_64 rng(seed);
        std::vector<std::vector<CategoryMass>> membership(word_count());
        for (word_id w = 0; w < word_count(); ++w) {
            std::map<category_id, double> acc;
            for (const auto& e : membership_[w]) {
                if (e.category == cat) {
                    // One draw per word that touches the category, in word order.
                    const auto bucket = static_cast<category_id>(rng() % k);
                    acc[first_new + bucket] += e.mass;
                } else {
                    acc[remap[e.category]] += e.mass;
                }
            }
            for (const auto& [c, m] : acc) membership[w].push_back({c, m});
        }
        return Partition(std::move(labels), std::move(membership)).pruned();
    }

    /// Canonical category sequence for a deterministic partition: categories
    /// renumbered by first occurrence over ascending word ids (a restricted
    /// growth string). Two deterministic partitions have the same signature
    /// iff they are the same set partition up to category relabelling.
    std::vector<category_id> canonical_signature() const {
        std::vector<category_id> sig(word_count());
        std::map<category_id, category_id> first_seen;
        for (word_id w = 0; w < word_count(); ++w) {
            const category_id c = category_of(w);
            auto [it, inserted] = first_seen.emplace(c, static_cast<category_id>(first_seen.size()));
            sig[w] = it->second;
        }
        return sig;
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    /// Drops categories with zero total mass, remapping ids and labels.
    Partition pruned() const {
        std::vector<double> totals(labels_.size(), 0.0);
        for (const auto& entries : membership_)
            for (const auto& e : entries) totals[e.category] += e.mass;
        std::vector<category_id> remap(labels_.size());
        std::vector<std::string> labels;
        for (category_id c = 0; c < labels_.size(); ++c) {
            if (totals[c] > 0.0) {
                remap[c] = static_cast<category_id>(labels.size());
                labels.push_back(labels_[c]);
            }
        }
        if (labels.size() == labels_.size()) return *this;
        std::vector<std::vector<CategoryMass>> membership(word_count());
        for (word_id w = 0; w < word_count(); ++w)
            for (const auto& e : membership_[w])
                membership[w].push_back({remap[e.category], e.mass});
        return Partition(std::move(labels), std::move(membership));
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<CategoryMass>> membership_;
};

} // namespace syncat

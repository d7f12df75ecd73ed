#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncat/errors.hpp"

namespace syncat {

using word_id = std::uint32_t;
using category_id = std::uint32_t;

/// Bidirectional word <-> id map with ids dense over [0, size()).
///
/// Ids are assigned in first-insertion order, so a vocabulary built by a
/// single pass over a corpus (or a serialized language file) is fully
/// determined by its input.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Builds a vocabulary from a word list; duplicates collapse to one id.
    explicit Vocabulary(const std::vector<std::string>& words) {
        for (const auto& w : words) add(w);
    }

    /// Returns the id of `word`, inserting it if unseen.
    word_id add(std::string_view word) {
        auto it = ids_.find(std::string(word));
        if (it != ids_.end()) return it->second;
        const word_id id = static_cast<word_id>(words_.size());
        words_.emplace_back(word);
        ids_.emplace(words_.back(), id);
        return id;
    }

    /// Returns the id of `word` if present.
    std::optional<word_id> find(std::string_view word) const {
        auto it = ids_.find(std::string(word));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    /// Returns the id of `word`, or raises a validation error naming it.
    word_id require(std::string_view word) const {
        auto id = find(word);
        if (!id) throw validation_error("unknown word: '" + std::string(word) + "'");
        return *id;
    }

    /// Returns the word string for a dense id.
    const std::string& word(word_id id) const {
        if (id >= words_.size()) throw validation_error("word id out of range");
        return words_[id];
    }

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

    /// All words in id order.
    const std::vector<std::string>& words() const { return words_; }

    bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

private:
    std::vector<std::string> words_;
    std::map<std::string, word_id, std::less<>> ids_;
};

} // namespace syncat

// Copyright 2026 The qarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Transaction databases, itemsets and exact supports.
 *
 * A TransactionDB is the N x M binary matrix D with D(i, j) = 1 iff item j is
 * contained in transaction i. It is stored sparsely in both orientations
 * (row lists and column lists) so that both the oracle lookups of the
 * simulator and the counting loops of Apriori stay cheap even for the
 * million-row public benchmark files.
 */
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qarm {

using ItemId = std::uint32_t;
using RowId = std::uint32_t;

/// Exact non-negative rational num/den, used for thresholds and supports.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// True iff count/total >= num/den, evaluated without rounding.
    bool reached_by(std::uint64_t count, std::uint64_t total) const {
        return static_cast<unsigned __int128>(count) * den >=
               static_cast<unsigned __int128>(num) * total;
    }
};

/// Parses "0.5", "1/2", "1%" or "2.5%" into an exact ratio.
Ratio parse_ratio(std::string_view text);

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/**
 * A nonempty, strictly increasing list of item indices.
 */
class Itemset {
  public:
    Itemset() = default;
    /// Sorts the input; throws std::invalid_argument on empty input or
    /// repeated items.
    Itemset(std::initializer_list<ItemId> items);
    explicit Itemset(std::vector<ItemId> items);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    ItemId operator[](std::size_t l) const { return items_[l]; }
    ItemId back() const { return items_.back(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<ItemId> &items() const { return items_; }

    bool contains(ItemId item) const;
    /// True iff every item of this set is in other.
    bool subset_of(const Itemset &other) const;

    std::string to_string() const;

    friend auto operator<=>(const Itemset &, const Itemset &) = default;
    friend bool operator==(const Itemset &, const Itemset &) = default;

  private:
    std::vector<ItemId> items_;
};

struct ExactSupport {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    double value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    friend bool operator==(const ExactSupport &, const ExactSupport &) = default;
};

class TransactionDB {
  public:
    TransactionDB() = default;
    /// Builds from per-transaction item lists. Lists may be unsorted and
    /// contain duplicates. n_items must exceed every item id.
    TransactionDB(std::vector<std::vector<ItemId>> rows, std::size_t n_items);

    /// Builds from a dense row-major 0/1 matrix.
    static TransactionDB from_dense(const std::vector<std::vector<int>> &matrix);

    std::size_t n_transactions() const { return row_offsets_.size() - 1; }
    std::size_t n_items() const { return n_items_; }
    std::size_t nonzeros() const { return row_items_.size(); }

    /// Sorted items of transaction i.
    std::span<const ItemId> row(RowId i) const {
        return {row_items_.data() + row_offsets_[i], row_items_.data() + row_offsets_[i + 1]};
    }
    /// Sorted transactions containing item j.
    std::span<const RowId> column(ItemId j) const {
        return {col_rows_.data() + col_offsets_[j], col_rows_.data() + col_offsets_[j + 1]};
    }
    std::size_t column_count(ItemId j) const { return col_offsets_[j + 1] - col_offsets_[j]; }

    /// D(i, j). Out-of-range indices read as 0.
    bool contains(std::size_t i, std::size_t j) const;

    const std::vector<std::string> &labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

    friend bool operator==(const TransactionDB &a, const TransactionDB &b) {
        return a.n_items_ == b.n_items_ && a.row_offsets_ == b.row_offsets_ &&
               a.row_items_ == b.row_items_;
    }

  private:
    std::size_t n_items_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<ItemId> row_items_;
    std::vector<std::size_t> col_offsets_{0};
    std::vector<RowId> col_rows_;
    std::vector<std::string> labels_;
};

/// Reads the FIMI .dat format: one transaction per nonempty line, items as
/// whitespace-separated non-negative integers. M = max id + 1.
TransactionDB parse_fimi(std::istream &in);
TransactionDB parse_fimi(std::string_view text);
TransactionDB load_fimi(const std::string &path);

/// Writes one line per transaction. Empty transactions become empty lines,
/// which the parser skips, so only databases without empty rows round-trip.
std::string serialize_fimi(const TransactionDB &db);

/// Throws std::out_of_range if an item of x is not below M.
ExactSupport exact_support(const TransactionDB &db, const Itemset &x);

struct SynthResult {
    TransactionDB db;
    /// Exact support realized for every requested itemset.
    std::map<Itemset, ExactSupport> achieved;
};

/**
 * Synthesizes an n x m database. Singleton targets are met exactly;
 * multi-item targets are met greedily where the singleton placements allow
 * it. Items without a singleton target get a seeded random column count.
 * Throws std::invalid_argument on an infeasible singleton target.
 */
SynthResult synth_db(std::size_t n, std::size_t m, const std::map<Itemset, Ratio> &targets,
                     std::uint64_t seed);

/// Independent Bernoulli(density) entries.
TransactionDB random_db(std::size_t n, std::size_t m, double density, std::uint64_t seed);

} // namespace qarm

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

#include "qarm/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace qarm {

namespace {

constexpr ItemId kMaxItemId = (1u << 28);

std::uint64_t pow10(std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        r *= 10;
    }
    return r;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

} // namespace

Ratio parse_ratio(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("invalid ratio '" + std::string(text) + "'"); };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    if (text.empty()) throw fail();

    Ratio r;
    bool percent = false;
    if (text.back() == '%') {
        percent = true;
        text.remove_suffix(1);
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        if (percent) throw fail();
        auto a = text.substr(0, slash);
        auto b = text.substr(slash + 1);
        auto ra = std::from_chars(a.data(), a.data() + a.size(), r.num);
        auto rb = std::from_chars(b.data(), b.data() + b.size(), r.den);
        if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} ||
            rb.ptr != b.data() + b.size() || r.den == 0)
            throw fail();
    } else {
        auto dot = text.find('.');
        std::string digits(text.substr(0, dot));
        std::size_t frac = 0;
        if (dot != std::string_view::npos) {
            auto tail = text.substr(dot + 1);
            digits += tail;
            frac = tail.size();
        }
        if (digits.empty() || digits.size() > 18 ||
            !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw fail();
        r.num = std::stoull(digits);
        r.den = pow10(frac);
    }
    if (percent) r.den *= 100;
    auto g = std::gcd(r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

// ---------------------------------------------------------------- Itemset

Itemset::Itemset(std::initializer_list<ItemId> items) : Itemset(std::vector<ItemId>(items)) {}

Itemset::Itemset(std::vector<ItemId> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("itemset must be nonempty");
    std::sort(items_.begin(), items_.end());
    if (std::adjacent_find(items_.begin(), items_.end()) != items_.end())
        throw std::invalid_argument("itemset has repeated items");
}

bool Itemset::contains(ItemId item) const {
    return std::binary_search(items_.begin(), items_.end(), item);
}

bool Itemset::subset_of(const Itemset &other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

std::string Itemset::to_string() const {
    std::string s = "{";
    for (std::size_t l = 0; l < items_.size(); ++l) {
        if (l) s += ',';
        s += std::to_string(items_[l]);
    }
    return s + "}";
}

// ---------------------------------------------------------- TransactionDB

TransactionDB::TransactionDB(std::vector<std::vector<ItemId>> rows, std::size_t n_items)
    : n_items_(n_items) {
    if (rows.empty()) throw std::invalid_argument("no transactions");
    if (n_items == 0) throw std::invalid_argument("a database needs at least one item");

    std::vector<std::size_t> col_counts(n_items, 0);
    row_offsets_.reserve(rows.size() + 1);
    for (auto &r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        for (ItemId j : r) {
            if (j >= n_items) throw std::invalid_argument("item id exceeds n_items");
            ++col_counts[j];
        }
        row_items_.insert(row_items_.end(), r.begin(), r.end());
        row_offsets_.push_back(row_items_.size());
    }

    col_offsets_.resize(n_items + 1);
    col_offsets_[0] = 0;
    std::partial_sum(col_counts.begin(), col_counts.end(), col_offsets_.begin() + 1);
    col_rows_.resize(row_items_.size());
    std::vector<std::size_t> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
    for (RowId i = 0; i + 1 < row_offsets_.size(); ++i) {
        for (ItemId j : row(i)) col_rows_[cursor[j]++] = i;
    }
}

TransactionDB TransactionDB::from_dense(const std::vector<std::vector<int>> &matrix) {
    if (matrix.empty()) throw std::invalid_argument("no transactions");
    const std::size_t m = matrix.front().size();
    std::vector<std::vector<ItemId>> rows;
    rows.reserve(matrix.size());
    for (const auto &r : matrix) {
        if (r.size() != m) throw std::invalid_argument("ragged matrix");
        auto &out = rows.emplace_back();
        for (std::size_t j = 0; j < m; ++j) {
            if (r[j] != 0 && r[j] != 1) throw std::invalid_argument("matrix entries must be 0 or 1");
            if (r[j]) out.push_back(static_cast<ItemId>(j));
        }
    }
    return TransactionDB(std::move(rows), m);
}

bool TransactionDB::contains(std::size_t i, std::size_t j) const {
    if (i >= n_transactions() || j >= n_items_) return false;
    auto r = row(static_cast<RowId>(i));
    return std::binary_search(r.begin(), r.end(), static_cast<ItemId>(j));
}

void TransactionDB::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_items_)
        throw std::invalid_argument("label count must equal n_items");
    labels_ = std::move(labels);
}

// ------------------------------------------------------------------- FIMI

TransactionDB parse_fimi(std::string_view text) {
    std::vector<std::vector<ItemId>> rows;
    ItemId max_id = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        std::vector<ItemId> items;
        std::size_t p = 0;
        while (p < line.size()) {
            while (p < line.size() && is_space(line[p])) ++p;
            if (p == line.size()) break;
            std::size_t q = p;
            while (q < line.size() && !is_space(line[q])) ++q;
            auto token = line.substr(p, q - p);
            ItemId id = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
            if (ec != std::errc{} || ptr != token.data() + token.size() || id >= kMaxItemId) {
                throw ParseError("line " + std::to_string(line_no) + ": invalid item token '" +
                                     std::string(token) + "'",
                                 line_no);
            }
            max_id = std::max(max_id, id);
            items.push_back(id);
            p = q;
        }
        if (!items.empty()) rows.push_back(std::move(items));
    }
    if (rows.empty()) throw ParseError("no transactions", line_no);
    return TransactionDB(std::move(rows), static_cast<std::size_t>(max_id) + 1);
}

TransactionDB parse_fimi(std::istream &in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_fimi(std::string_view(buffer.str()));
}

TransactionDB load_fimi(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_fimi(std::string_view(text));
}

std::string serialize_fimi(const TransactionDB &db) {
    std::string out;
    for (RowId i = 0; i < db.n_transactions(); ++i) {
        bool first = true;
        for (ItemId j : db.row(i)) {
            if (!first) out += ' ';
            out += std::to_string(j);
            first = false;
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------- support

ExactSupport exact_support(const TransactionDB &db, const Itemset &x) {
    if (x.empty()) throw std::invalid_argument("empty itemset");
    for (ItemId j : x) {
        if (j >= db.n_items()) throw std::out_of_range("item " + std::to_string(j) + " out of range");
    }
    // Intersect column lists, starting from the rarest item.
    std::vector<ItemId> order(x.begin(), x.end());
    std::sort(order.begin(), order.end(),
              [&](ItemId a, ItemId b) { return db.column_count(a) < db.column_count(b); });
    auto first = db.column(order.front());
    std::vector<RowId> acc(first.begin(), first.end());
    std::vector<RowId> next;
    for (std::size_t l = 1; l < order.size() && !acc.empty(); ++l) {
        auto col = db.column(order[l]);
        next.clear();
        std::set_intersection(acc.begin(), acc.end(), col.begin(), col.end(),
                              std::back_inserter(next));
        acc.swap(next);
    }
    return {acc.size(), db.n_transactions()};
}

// -------------------------------------------------------------- synthesis

SynthResult synth_db(std::size_t n, std::size_t m, const std::map<Itemset, Ratio> &targets,
                     std::uint64_t seed) {
    if (n == 0 || m == 0) throw std::invalid_argument("n and m must be positive");
    std::mt19937_64 rng(seed);

    std::vector<std::optional<std::size_t>> singleton_count(m);
    for (const auto &[x, r] : targets) {
        if (x.back() >= m) throw std::invalid_argument("target itemset " + x.to_string() + " out of range");
        if (r.den == 0 || r.num > r.den) throw std::invalid_argument("target outside [0,1]");
        if ((static_cast<unsigned __int128>(r.num) * n) % r.den != 0) {
            throw std::invalid_argument("infeasible target for " + x.to_string() +
                                        ": denominator does not divide n");
        }
        if (x.size() == 1) singleton_count[x[0]] = static_cast<std::size_t>(r.num * n / r.den);
    }

    std::vector<std::vector<bool>> has(m, std::vector<bool>(n, false));
    std::vector<RowId> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    for (ItemId j = 0; j < m; ++j) {
        std::size_t want = singleton_count[j]
                               ? *singleton_count[j]
                               : std::uniform_int_distribution<std::size_t>(0, n)(rng);
        std::vector<bool> chosen(n, false);
        std::size_t placed = 0;

        // Multi-item targets whose other items are already placed pin how
        // many of the rows holding those items should also hold j.
        for (const auto &[x, r] : targets) {
            if (x.size() < 2 || x.back() != j) continue;
            std::vector<RowId> eligible;
            for (RowId i : all_rows) {
                bool ok = !chosen[i];
                for (std::size_t l = 0; ok && l + 1 < x.size(); ++l) ok = has[x[l]][i];
                if (ok) eligible.push_back(i);
            }
            std::shuffle(eligible.begin(), eligible.end(), rng);
            std::size_t joint = static_cast<std::size_t>(r.num * n / r.den);
            for (std::size_t q = 0; q < eligible.size() && q < joint && placed < want; ++q) {
                chosen[eligible[q]] = true;
                ++placed;
            }
        }

        // Fill the remainder preferring rows that do not complete any other
        // pinned target.
        std::vector<RowId> rest;
        std::vector<RowId> avoid;
        for (RowId i : all_rows) {
            if (chosen[i]) continue;
            bool completes = false;
            for (const auto &[x, r] : targets) {
                if (x.size() < 2 || x.back() != j) continue;
                bool all = true;
                for (std::size_t l = 0; all && l + 1 < x.size(); ++l) all = has[x[l]][i];
                completes = completes || all;
            }
            (completes ? avoid : rest).push_back(i);
        }
        std::shuffle(rest.begin(), rest.end(), rng);
        std::shuffle(avoid.begin(), avoid.end(), rng);
        rest.insert(rest.end(), avoid.begin(), avoid.end());
        for (std::size_t q = 0; placed < want && q < rest.size(); ++q) {
            chosen[rest[q]] = true;
            ++placed;
        }
        has[j] = std::move(chosen);
    }

    std::vector<std::vector<ItemId>> rows(n);
    for (ItemId j = 0; j < m; ++j)
        for (RowId i = 0; i < n; ++i)
            if (has[j][i]) rows[i].push_back(j);

    SynthResult result{TransactionDB(std::move(rows), m), {}};
    for (const auto &[x, r] : targets) result.achieved[x] = exact_support(result.db, x);
    return result;
}

TransactionDB random_db(std::size_t n, std::size_t m, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    std::vector<std::vector<ItemId>> rows(n);
    for (auto &r : rows)
        for (ItemId j = 0; j < m; ++j)
            if (bit(rng)) r.push_back(j);
    return TransactionDB(std::move(rows), m);
}

} // namespace qarm

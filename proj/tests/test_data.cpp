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

#include <gtest/gtest.h>

#include <random>

namespace qarm {
namespace {

TransactionDB toy() { return TransactionDB::from_dense({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0, 0, 0}}); }

std::vector<int> dense_row(const TransactionDB &db, RowId i) {
    std::vector<int> r(db.n_items());
    for (std::size_t j = 0; j < db.n_items(); ++j) r[j] = db.contains(i, j);
    return r;
}

// Count of rows holding every item of x, straight from the dense view.
std::uint64_t brute_count(const TransactionDB &db, const Itemset &x) {
    std::uint64_t c = 0;
    for (RowId i = 0; i < db.n_transactions(); ++i) {
        bool all = true;
        for (ItemId j : x) all = all && db.contains(i, j);
        c += all;
    }
    return c;
}

TEST(ParseFimi, TranscribesRows) {
    const auto db = parse_fimi(std::string_view("0 2 3\n1\n"));
    ASSERT_EQ(db.n_transactions(), 2u);
    ASSERT_EQ(db.n_items(), 4u);
    EXPECT_EQ(dense_row(db, 0), (std::vector<int>{1, 0, 1, 1}));
    EXPECT_EQ(dense_row(db, 1), (std::vector<int>{0, 1, 0, 0}));
}

TEST(ParseFimi, CollapsesDuplicates) {
    const auto db = parse_fimi(std::string_view("5\n5 5\n"));
    ASSERT_EQ(db.n_transactions(), 2u);
    ASSERT_EQ(db.n_items(), 6u);
    for (RowId i = 0; i < 2; ++i) EXPECT_EQ(dense_row(db, i), (std::vector<int>{0, 0, 0, 0, 0, 1}));
}

TEST(ParseFimi, SkipsBlankLinesAndAcceptsTabs) {
    const auto db = parse_fimi(std::string_view("1\t2\n\n   \n0\r\n"));
    EXPECT_EQ(db.n_transactions(), 2u);
    EXPECT_EQ(db.n_items(), 3u);
}

TEST(ParseFimi, RejectsBadTokenWithLineNumber) {
    try {
        parse_fimi(std::string_view("1 2\n3 x\n"));
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_fimi(std::string_view("-1\n")), ParseError);
    EXPECT_THROW(parse_fimi(std::string_view("1.5\n")), ParseError);
}

TEST(ParseFimi, RejectsEmptyInput) {
    EXPECT_THROW(parse_fimi(std::string_view("")), ParseError);
    EXPECT_THROW(parse_fimi(std::string_view("\n \n")), ParseError);
}

TEST(ParseFimi, RoundTripProperty) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        const int lines = 1 + static_cast<int>(gen() % 20);
        for (int l = 0; l < lines; ++l) {
            const int width = 1 + static_cast<int>(gen() % 6);
            for (int w = 0; w < width; ++w) text += std::to_string(gen() % 12) + (w + 1 < width ? " " : "\n");
        }
        const auto db = parse_fimi(std::string_view(text));
        const auto back = parse_fimi(std::string_view(serialize_fimi(db)));
        ASSERT_EQ(back, db) << text;
    }
}

TEST(ExactSupport, ToyValues) {
    const auto db = toy();
    EXPECT_EQ(exact_support(db, {0}), (ExactSupport{3, 4}));
    EXPECT_EQ(exact_support(db, {0, 1}), (ExactSupport{2, 4}));
    EXPECT_EQ(exact_support(db, {0, 1, 2}), (ExactSupport{1, 4}));
}

TEST(ExactSupport, OutOfRangeThrows) { EXPECT_THROW(exact_support(toy(), {3}), std::out_of_range); }

TEST(ExactSupport, AgreesWithDenseCountAndIsMonotone) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + gen() % 6;
        const auto db = random_db(1 + gen() % 30, m, 0.5, gen());
        std::vector<ItemId> items;
        for (ItemId j = 0; j < m; ++j)
            if (gen() % 2) items.push_back(j);
        if (items.empty()) items.push_back(0);
        const Itemset y(items);
        ASSERT_EQ(exact_support(db, y).numerator, brute_count(db, y));
        for (ItemId j : y) {
            const Itemset x{j};
            ASSERT_GE(exact_support(db, x).numerator, exact_support(db, y).numerator);
            ASSERT_EQ(exact_support(db, x).numerator, db.column_count(j));
        }
    }
}

TEST(Itemset, CanonicalAndValidated) {
    const Itemset x{3, 1, 2};
    EXPECT_EQ(x.items(), (std::vector<ItemId>{1, 2, 3}));
    EXPECT_TRUE(Itemset({1}).subset_of(x));
    EXPECT_FALSE(Itemset({4}).subset_of(x));
    EXPECT_THROW(Itemset({1, 1}), std::invalid_argument);
    EXPECT_THROW(Itemset(std::vector<ItemId>{}), std::invalid_argument);
}

TEST(Ratio, ParsesForms) {
    EXPECT_EQ(parse_ratio("1/2").num * 2, parse_ratio("1/2").den);
    EXPECT_DOUBLE_EQ(parse_ratio("0.5").value(), 0.5);
    EXPECT_DOUBLE_EQ(parse_ratio("1%").value(), 0.01);
    EXPECT_DOUBLE_EQ(parse_ratio("2.5%").value(), 0.025);
    EXPECT_THROW(parse_ratio("abc"), std::invalid_argument);
}

TEST(Ratio, ReachedByIsExact) {
    const Ratio one_percent{1, 100};
    EXPECT_TRUE(one_percent.reached_by(882, 88162));
    EXPECT_FALSE(one_percent.reached_by(881, 88162));
    EXPECT_TRUE((Ratio{1, 2}).reached_by(2, 4));
}

TEST(SynthDb, SingletonTargets) {
    auto r = synth_db(4, 3, {{Itemset{0}, Ratio{1, 2}}}, 1);
    EXPECT_EQ(exact_support(r.db, {0}).numerator, 2u);
    r = synth_db(4, 3, {{Itemset{0}, Ratio{1, 1}}}, 1);
    EXPECT_EQ(exact_support(r.db, {0}).numerator, 4u);
}

TEST(SynthDb, PairTargetReportedAndChecked) {
    const auto r = synth_db(8, 4, {{Itemset{0}, {1, 2}}, {Itemset{1}, {1, 2}}, {Itemset{0, 1}, {1, 4}}}, 3);
    EXPECT_EQ(exact_support(r.db, {0}), (ExactSupport{4, 8}));
    EXPECT_EQ(exact_support(r.db, {1}), (ExactSupport{4, 8}));
    for (const auto &[x, s] : r.achieved) EXPECT_EQ(exact_support(r.db, x), s);
    EXPECT_EQ(r.achieved.at(Itemset{0, 1}), (ExactSupport{2, 8}));
}

TEST(SynthDb, InfeasibleTargetThrows) {
    EXPECT_THROW(synth_db(4, 2, {{Itemset{0}, {1, 3}}}, 1), std::invalid_argument);
}

TEST(SynthDb, SeedReproducible) {
    const std::map<Itemset, Ratio> t{{Itemset{1}, {3, 8}}};
    EXPECT_EQ(synth_db(8, 4, t, 9).db, synth_db(8, 4, t, 9).db);
}

} // namespace
} // namespace qarm

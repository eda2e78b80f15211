#include "imgtn/exact_rank.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

namespace imgtn {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct overflow {};

std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow{};
    return r;
}
std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw overflow{};
    return r;
}
std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
bool is_zero(std::int64_t a) { return a == 0; }

BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }
BigInt sub(const BigInt& a, const BigInt& b) { return a - b; }
BigInt gcd_of(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
bool is_zero(const BigInt& a) { return a.is_zero(); }

template <class Int>
struct SparseRow {
    std::vector<int> cols;
    std::vector<Int> vals;
};

template <class Int>
void remove_content(SparseRow<Int>& row) {
    Int g = 0;
    for (const auto& v : row.vals) {
        g = gcd_of(g, v);
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& v : row.vals) v /= g;
}

// target <- a * target - b * pivot
template <class Int>
SparseRow<Int> combine(const SparseRow<Int>& target, const Int& a, const SparseRow<Int>& pivot,
                       const Int& b) {
    SparseRow<Int> out;
    out.cols.reserve(target.cols.size() + pivot.cols.size());
    out.vals.reserve(target.cols.size() + pivot.cols.size());
    std::size_t s = 0, p = 0;
    while (s < target.cols.size() || p < pivot.cols.size()) {
        int col;
        Int value;
        if (p == pivot.cols.size() || (s < target.cols.size() && target.cols[s] < pivot.cols[p])) {
            col = target.cols[s];
            value = mul(a, target.vals[s++]);
        } else if (s == target.cols.size() || pivot.cols[p] < target.cols[s]) {
            col = pivot.cols[p];
            value = sub(Int(0), mul(b, pivot.vals[p++]));
        } else {
            col = target.cols[s];
            value = sub(mul(a, target.vals[s++]), mul(b, pivot.vals[p++]));
        }
        if (!is_zero(value)) {
            out.cols.push_back(col);
            out.vals.push_back(std::move(value));
        }
    }
    remove_content(out);
    return out;
}

template <class Int>
std::size_t eliminate(std::vector<SparseRow<Int>> rows) {
    std::erase_if(rows, [](const auto& r) { return r.cols.empty(); });
    std::size_t rank = 0;
    while (!rows.empty()) {
        // Sparsest row pivots first to limit fill-in.
        std::size_t best = 0;
        for (std::size_t t = 1; t < rows.size(); ++t)
            if (rows[t].cols.size() < rows[best].cols.size()) best = t;
        SparseRow<Int> pivot = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        ++rank;

        const int col = pivot.cols.front();
        const Int a = pivot.vals.front();
        for (auto& row : rows) {
            auto it = std::lower_bound(row.cols.begin(), row.cols.end(), col);
            if (it == row.cols.end() || *it != col) continue;
            const Int b = row.vals[static_cast<std::size_t>(it - row.cols.begin())];
            row = combine(row, a, pivot, b);
        }
        std::erase_if(rows, [](const auto& r) { return r.cols.empty(); });
    }
    return rank;
}

std::size_t rank_of(const std::vector<SparseRow<std::int64_t>>& rows) {
    try {
        return eliminate(rows);
    } catch (const overflow&) {
        std::vector<SparseRow<BigInt>> big(rows.size());
        for (std::size_t t = 0; t < rows.size(); ++t) {
            big[t].cols = rows[t].cols;
            big[t].vals.assign(rows[t].vals.begin(), rows[t].vals.end());
        }
        return eliminate(std::move(big));
    }
}

} // namespace

std::size_t exact_rank(const IntegerMatrix& matrix) {
    std::vector<SparseRow<std::int64_t>> rows(static_cast<std::size_t>(matrix.rows()));
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < matrix.cols(); ++c)
            if (matrix(r, c) != 0) {
                rows[static_cast<std::size_t>(r)].cols.push_back(static_cast<int>(c));
                rows[static_cast<std::size_t>(r)].vals.push_back(matrix(r, c));
            }
    return rank_of(rows);
}

std::size_t exact_rank(const Unfolding& unfolding) {
    if (unfolding.entries.empty()) return 0;

    // Collapse identical columns, then identical rows; neither changes the rank.
    std::vector<std::vector<int>> col_pattern(static_cast<std::size_t>(unfolding.cols()));
    for (auto [p, q] : unfolding.entries) col_pattern[static_cast<std::size_t>(q)].push_back(p);
    std::map<std::vector<int>, int> col_class;
    std::vector<int> col_id(col_pattern.size());
    for (std::size_t q = 0; q < col_pattern.size(); ++q) {
        auto [it, fresh] = col_class.emplace(col_pattern[q], static_cast<int>(col_class.size()));
        col_id[q] = it->second;
    }

    std::vector<std::set<int>> row_pattern(static_cast<std::size_t>(unfolding.rows()));
    for (auto [p, q] : unfolding.entries)
        row_pattern[static_cast<std::size_t>(p)].insert(col_id[static_cast<std::size_t>(q)]);
    std::set<std::set<int>> distinct_rows(row_pattern.begin(), row_pattern.end());

    std::vector<SparseRow<std::int64_t>> rows;
    rows.reserve(distinct_rows.size());
    for (const auto& pattern : distinct_rows) {
        if (pattern.empty()) continue;
        SparseRow<std::int64_t> row;
        row.cols.assign(pattern.begin(), pattern.end());
        row.vals.assign(row.cols.size(), 1);
        rows.push_back(std::move(row));
    }
    return rank_of(rows);
}

} // namespace imgtn

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tpc/sequence_rule.hpp"
#include "tpc/summation.hpp"
#include "tpc/univariate.hpp"

namespace tpc {

// A d-variate tensor product problem: one univariate spectrum per
// coordinate, generated from a sequence rule. The d-variate eigenvalues are
// all products prod_k lambda(k, j_k) over index vectors in N^d.
class ProductProblem {
public:
    ProductProblem(const SequenceRule& rule, int d, bool normalized = true) : rule_(rule) {
        if (d < 1)
            throw std::invalid_argument("ProductProblem: dimension must be >= 1");
        coords_.reserve(static_cast<std::size_t>(d));
        for (int k = 1; k <= d; ++k)
            coords_.push_back(UnivariateSpectrum::from_rule(rule, k, normalized));
    }

    // Assemble from prebuilt coordinate spectra (oracle harnesses, permuted
    // or truncated coordinates).
    explicit ProductProblem(std::vector<UnivariateSpectrum> coords) : coords_(std::move(coords)) {
        if (coords_.empty())
            throw std::invalid_argument("ProductProblem: dimension must be >= 1");
    }

    int dimension() const { return static_cast<int>(coords_.size()); }
    const SequenceRule& rule() const { return rule_; }
    const UnivariateSpectrum& coordinate(int k) const {
        return coords_.at(static_cast<std::size_t>(k - 1));
    }

    // lambda(k,1) = 1 for every coordinate (exactly).
    bool leading_is_unit() const {
        for (const UnivariateSpectrum& s : coords_)
            if (s.eigenvalue(1) != 1.0)
                return false;
        return true;
    }

    double second_ratio(int k) const { return coordinate(k).second_ratio(); }

private:
    SequenceRule rule_;
    std::vector<UnivariateSpectrum> coords_;
};

// prod_k sum_j lambda(k,j)^x, carried as a log so that large d neither
// overflows nor underflows.
struct TracePower {
    enum class Status { ok, divergent };
    Status status = Status::ok;
    double log_value = 0.0;
    double value = 0.0;             // exp(log_value); may round to 0 or inf
    int divergent_coordinate = 0;   // 1-based, set when divergent
    double relative_error = 0.0;    // accumulated Wiener tail-error estimate

    bool ok() const { return status == Status::ok; }
};

inline TracePower product_trace_power(const ProductProblem& problem, double x) {
    TracePower out;
    NeumaierSum log_sum;
    for (int k = 1; k <= problem.dimension(); ++k) {
        PowerSum ps = problem.coordinate(k).power_sum(x);
        if (!ps.ok()) {
            out.status = TracePower::Status::divergent;
            out.divergent_coordinate = k;
            return out;
        }
        log_sum.add(std::log(ps.value));
        if (ps.value > 0.0)
            out.relative_error += ps.tail_error / ps.value;
    }
    out.log_value = log_sum.value();
    out.value = std::exp(out.log_value);
    return out;
}

// One entry of the non-increasing rearrangement of the product eigenvalues.
struct RankedEigenvalue {
    double log_value = 0.0;
    std::vector<std::uint32_t> index; // 1-based, one entry per coordinate
    std::uint64_t rank = 0;           // 1-based position in the rearrangement

    double value() const { return std::exp(log_value); }
};

// Best-first enumeration of the non-increasing rearrangement.
//
// A max-heap on the product log-value is seeded with (1,...,1). Popping an
// index vector j spawns children j + e_i only at coordinates
// i >= max{i' : j_{i'} > 1}: every vector's unique parent decrements its
// last raised coordinate, so nothing is generated twice and no visited set
// is needed. Raising a coordinate never increases the product, which makes
// the heap order a valid enumeration order. Ties pop in colexicographic
// index order (trailing coordinates compared first), so for d = 2 the
// rank-2 group reads (2,1), (3,1), (1,2), (1,3).
//
// Single-owner stateful; run independent instances for concurrent sweeps.
class ProductEnumerator {
public:
    explicit ProductEnumerator(const ProductProblem& problem,
                               std::uint64_t node_cap = 10'000'000)
        : problem_(&problem), d_(static_cast<std::uint32_t>(problem.dimension())),
          node_cap_(std::min<std::uint64_t>(node_cap, 2'000'000'000 / d_)),
          logs_(problem.dimension()) {
        pool_.assign(d_, 1u);
        heap_.push_back(HeapEntry{log_of_node(0), 0});
    }

    bool cap_reached() const { return capped_; }
    std::uint64_t nodes_created() const { return pool_.size() / d_; }

    // Next element of the rearrangement, or nullopt once the node budget is
    // exhausted (the enumeration cannot continue soundly past the cap).
    std::optional<RankedEigenvalue> next() {
        if (capped_ || heap_.empty())
            return std::nullopt;
        std::pop_heap(heap_.begin(), heap_.end(), HeapLess{this});
        HeapEntry top = heap_.back();
        heap_.pop_back();

        RankedEigenvalue out;
        out.log_value = top.log_value;
        out.rank = ++rank_;
        const std::uint32_t* idx = node(top.node);
        out.index.assign(idx, idx + d_);

        std::uint32_t first_child = 0;
        for (std::uint32_t i = 0; i < d_; ++i)
            if (idx[i] > 1u)
                first_child = i;
        if (nodes_created() + (d_ - first_child) > node_cap_) {
            capped_ = true;
            return out;
        }
        for (std::uint32_t i = first_child; i < d_; ++i) {
            std::uint32_t child = new_child(top.node, i);
            heap_.push_back(HeapEntry{log_of_node(child), child});
            std::push_heap(heap_.begin(), heap_.end(), HeapLess{this});
        }
        return out;
    }

private:
    struct HeapEntry {
        double log_value;
        std::uint32_t node;
    };

    // Max-heap: larger log_value first; exact ties in colexicographic index
    // order (std heap primitives use a less-than on the weaker element).
    struct HeapLess {
        const ProductEnumerator* self;
        bool operator()(const HeapEntry& a, const HeapEntry& b) const {
            if (a.log_value != b.log_value)
                return a.log_value < b.log_value;
            const std::uint32_t* ia = self->node(a.node);
            const std::uint32_t* ib = self->node(b.node);
            for (std::uint32_t i = self->d_; i-- > 0;) {
                if (ia[i] != ib[i])
                    return ia[i] > ib[i];
            }
            return false;
        }
    };

    const std::uint32_t* node(std::uint32_t id) const { return pool_.data() + std::size_t(id) * d_; }

    std::uint32_t new_child(std::uint32_t parent, std::uint32_t coord) {
        std::uint32_t id = static_cast<std::uint32_t>(pool_.size() / d_);
        pool_.resize(pool_.size() + d_);
        std::uint32_t* dst = pool_.data() + std::size_t(id) * d_;
        const std::uint32_t* src = node(parent);
        for (std::uint32_t i = 0; i < d_; ++i)
            dst[i] = src[i];
        dst[coord] += 1u;
        return id;
    }

    // Product log-value recomputed coordinate-by-coordinate in a fixed
    // order, so equal index multisets give bit-identical sums.
    double log_of_node(std::uint32_t id) const {
        const std::uint32_t* idx = node(id);
        double sum = 0.0;
        for (std::uint32_t i = 0; i < d_; ++i)
            sum += log_eigen(i, idx[i]);
        return sum;
    }

    double log_eigen(std::uint32_t coord, std::uint32_t j) const {
        std::vector<double>& memo = logs_[coord];
        while (memo.size() < j)
            memo.push_back(problem_->coordinate(static_cast<int>(coord) + 1)
                               .log_eigenvalue(memo.size() + 1));
        return memo[j - 1];
    }

    const ProductProblem* problem_;
    std::uint32_t d_;
    std::uint64_t node_cap_;
    bool capped_ = false;
    std::uint64_t rank_ = 0;
    std::vector<std::uint32_t> pool_;
    std::vector<HeapEntry> heap_;
    mutable std::vector<std::vector<double>> logs_;
};

struct TopEigenvalues {
    std::vector<RankedEigenvalue> values;
    bool capped = false;
};

// The m largest product eigenvalues in non-increasing order.
inline TopEigenvalues enumerate_top(const ProductProblem& problem, std::uint64_t m,
                                    std::uint64_t node_cap = 10'000'000) {
    TopEigenvalues out;
    ProductEnumerator it(problem, node_cap);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::optional<RankedEigenvalue> v = it.next();
        if (!v) {
            out.capped = it.cap_reached();
            break;
        }
        out.values.push_back(std::move(*v));
    }
    return out;
}

struct HeadSum {
    double value = 0.0;
    bool capped = false;
};

// sum of the n largest product eigenvalues, compensated.
inline HeadSum head_sum(const ProductProblem& problem, std::uint64_t n,
                        std::uint64_t node_cap = 10'000'000) {
    HeadSum out;
    ProductEnumerator it(problem, node_cap);
    NeumaierSum sum;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::optional<RankedEigenvalue> v = it.next();
        if (!v) {
            out.capped = it.cap_reached();
            break;
        }
        sum.add(std::exp(v->log_value));
    }
    out.value = sum.value();
    return out;
}

} // namespace tpc

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <thread>
#include <vector>

namespace besov {

// Neumaier variant of Kahan summation. Keeps a running compensation that
// also survives the case |term| > |sum|.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Deterministic compensated sum of f(i) for i in [0, count).
// Fixed-size chunks are summed independently (possibly in parallel) and the
// chunk totals are combined sequentially, so the result is bitwise identical
// regardless of thread count.
inline double chunked_sum(std::size_t count,
                          const std::function<double(std::size_t)>& f,
                          std::size_t chunk = 1024) {
    if (count == 0) return 0.0;
    std::size_t nchunks = (count + chunk - 1) / chunk;
    std::vector<double> partial(nchunks);

    auto run_chunk = [&](std::size_t c) {
        NeumaierSum s;
        std::size_t lo = c * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) s.add(f(i));
        partial[c] = s.value();
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (nchunks > 1 && hw > 1) {
        std::vector<std::future<void>> futs;
        std::size_t workers = std::min<std::size_t>(hw, nchunks);
        for (std::size_t w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t c = w; c < nchunks; c += workers) run_chunk(c);
            }));
        }
        for (auto& fu : futs) fu.get();
    } else {
        for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
    }

    NeumaierSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

// Parallel map over [0, count) writing into caller-indexed storage. Each
// index is computed exactly once; output order is by index, so results do
// not depend on scheduling.
template <typename F>
void parallel_for(std::size_t count, F&& f) {
    unsigned hw = std::thread::hardware_concurrency();
    if (count < 2 || hw < 2) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(hw, count);
    std::vector<std::future<void>> futs;
    for (std::size_t w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) f(i);
        }));
    }
    for (auto& fu : futs) fu.get();
}

// All multi-indices k in N^n with |k| = m, first coordinate descending.
// Order is fixed so downstream sums are reproducible.
inline std::vector<std::vector<int>> multi_indices(int n, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> k(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            k[pos] = left;
            out.push_back(k);
            return;
        }
        for (int v = left; v >= 0; --v) {
            k[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    if (n > 0 && m >= 0) rec(0, m);
    return out;
}

}  // namespace besov

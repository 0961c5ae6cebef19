#include "dge/types.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace dge {

namespace {

std::atomic<int> g_thread_count{0};

int resolved_thread_count() {
    int t = g_thread_count.load(std::memory_order_relaxed);
    if (t > 0) return t;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void fail(const char* message) { throw std::invalid_argument(message); }

}  // namespace

void set_thread_count(int threads) {
    g_thread_count.store(threads < 0 ? 0 : threads, std::memory_order_relaxed);
}

int thread_count() { return resolved_thread_count(); }

void warn(const std::string& message) {
    std::fprintf(stderr, "dge: warning: %s\n", message.c_str());
}

Hyperparams validate_params(const Hyperparams& p, Index n_frames, Index n_features) {
    if (n_frames < 2) fail("sequence too short");
    if (n_features < 1) fail("feature dimension out of range");
    if (p.patch_halfwidth < 1) fail("patch half-width out of range");
    if (p.search_halfwidth <= p.patch_halfwidth) fail("search half-width must exceed patch half-width");
    if (2 * static_cast<Index>(p.search_halfwidth) >= n_frames) fail("search half-width too large for sequence");
    if (!(p.nl_decay > 0.0)) fail("nl decay out of range");
    if (!(p.feature_kernel_decay > 0.0)) fail("feature kernel decay out of range");
    if (!(p.embed_kernel_decay > 0.0)) fail("embedding kernel decay out of range");
    if (p.embed_dim < 1) fail("embedding dim out of range");
    if (static_cast<Index>(p.embed_dim) > n_frames) fail("embedding dim exceeds frame count");
    if (static_cast<Index>(p.embed_dim) > n_features) fail("embedding dim exceeds feature dimension");
    if (p.dge_iterations < 0) fail("iteration count out of range");
    if (!(p.loss_mix >= 0.0 && p.loss_mix <= 1.0)) fail("alpha out of range");
    if (p.average_kernel_size < 1 || p.average_kernel_size % 2 == 0) fail("averaging kernel size must be odd and positive");
    if (!(p.temporal_shrink > 0.0 && p.temporal_shrink < 1.0)) fail("eta out of range");
    if (!(p.semantic_shrink > 0.0 && p.semantic_shrink < 1.0)) fail("mu out of range");
    if (p.cluster_count < 2) fail("cluster count out of range");
    if (static_cast<Index>(p.cluster_count) > n_frames) fail("cluster count exceeds frame count");
    if (p.descent_iterations < 1) fail("descent iterations out of range");
    if (p.detector_window < 1) fail("detector window out of range");
    if (2 * static_cast<Index>(p.detector_window) >= n_frames) fail("detector window too large for sequence");
    if (!std::isfinite(p.detector_z)) fail("detector threshold factor must be finite");
    if (p.detector_min_separation < 1) fail("detector min separation out of range");
    return p;
}

namespace detail {

void parallel_for(Index count, const std::function<void(Index)>& fn) {
    if (count <= 0) return;
    const int threads = std::min<Index>(resolved_thread_count(), count);
    if (threads <= 1) {
        for (Index i = 0; i < count; ++i) fn(i);
        return;
    }
    // Interleaved assignment keeps triangular workloads balanced.
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&fn, count, t, threads] {
            for (Index i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace dge

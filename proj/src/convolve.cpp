#include "ltl/convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace ltl {

Backend parse_backend(const std::string& name) {
    if (name == "naive") return Backend::Naive;
    if (name == "sat") return Backend::SummedArea;
    if (name == "fft") return Backend::Fft;
    if (name == "auto") return Backend::Auto;
    throw InvalidArgumentError("unknown backend: " + name);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Naive: return "naive";
        case Backend::SummedArea: return "sat";
        case Backend::Fft: return "fft";
        case Backend::Auto: return "auto";
    }
    return "?";
}

namespace {

std::mutex g_fftw_mutex;  // FFTW planning is not thread-safe

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn fn) {
    threads = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(1, n));
    if (threads <= 1 || n == 0) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
        std::size_t b = static_cast<std::size_t>(t) * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([=] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

void check_compat(const Domain& dom, const DiscreteKernel& k) {
    if (dom.dim != k.dim) throw DimensionMismatchError("config/kernel dimension mismatch");
    if (dom.epsilon != k.epsilon) throw DimensionMismatchError("config/kernel epsilon mismatch");
}

// Output geometry: growable axes expand by the kernel radius, periodic axes
// keep the domain box.
ScalarField make_output(const Domain& dom, const std::vector<long>& origin,
                        const DiscreteKernel& k) {
    ScalarField out;
    out.domain = dom;
    out.origin = origin;
    for (int d = 0; d < dom.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (dom.boundary[sd] == BoundaryMode::GrowableZero) {
            out.origin[sd] -= k.radius[sd];
            out.domain.extent[sd] += 2 * k.radius[sd];
        }
    }
    out.values.assign(out.box().cell_count(), 0.0);
    return out;
}

// ---- naive ---------------------------------------------------------------

template <typename At>
void naive_into(ScalarField& out, const DiscreteKernel& k, int threads, At at) {
    const auto ob = out.box();
    const auto kb = k.box();
    // Nonzero taps in offset-lexicographic order (fixed summation order).
    std::vector<Coord> koffs;
    std::vector<double> kw;
    for (std::size_t j = 0; j < k.weights.size(); ++j) {
        if (k.weights[j] == 0.0) continue;
        koffs.push_back(kb.coord(j));
        kw.push_back(k.weights[j]);
    }
    parallel_chunks(out.values.size(), threads, [&](std::size_t b, std::size_t e) {
        Coord zw(static_cast<std::size_t>(k.dim));
        for (std::size_t i = b; i < e; ++i) {
            Coord z = ob.coord(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < kw.size(); ++j) {
                const Coord& wv = koffs[j];
                for (int d = 0; d < k.dim; ++d) {
                    auto sd = static_cast<std::size_t>(d);
                    zw[sd] = z[sd] - wv[sd];
                }
                acc += kw[j] * at(zw);
            }
            out.values[i] = acc;
        }
    });
}

// ---- summed-area (uniform box) -------------------------------------------

// One sliding-window pass along `axis` over data laid out in `box`.
// Integer payload keeps binary counts exact; doubles use prefix sums with a
// fixed order.
template <typename T>
void window_axis(std::vector<T>& data, const detail::Box& box, int axis, long r,
                 bool periodic, int threads) {
    const long n = box.extent[static_cast<std::size_t>(axis)];
    // stride of the axis and number of independent lines
    std::size_t stride = 1;
    for (std::size_t d = box.extent.size(); d-- > static_cast<std::size_t>(axis) + 1;)
        stride *= static_cast<std::size_t>(box.extent[d]);
    const std::size_t total = data.size();
    const std::size_t lines = total / static_cast<std::size_t>(n);

    parallel_chunks(lines, threads, [&](std::size_t lb, std::size_t le) {
        std::vector<T> line(static_cast<std::size_t>(n));
        std::vector<T> prefix(static_cast<std::size_t>(n) + 1);
        for (std::size_t l = lb; l < le; ++l) {
            // Base offset of line l: lines enumerate all indices with the
            // axis coordinate 0.
            std::size_t inner = l % stride;
            std::size_t outer = l / stride;
            std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
            for (long i = 0; i < n; ++i)
                line[static_cast<std::size_t>(i)] = data[base + static_cast<std::size_t>(i) * stride];
            prefix[0] = T{};
            for (long i = 0; i < n; ++i)
                prefix[static_cast<std::size_t>(i) + 1] =
                    prefix[static_cast<std::size_t>(i)] + line[static_cast<std::size_t>(i)];
            const T all = prefix[static_cast<std::size_t>(n)];
            for (long i = 0; i < n; ++i) {
                long lo = i - r, hi = i + r;
                T acc;
                if (!periodic) {
                    long clo = std::max(lo, 0L), chi = std::min(hi, n - 1);
                    acc = clo > chi ? T{}
                                    : static_cast<T>(prefix[static_cast<std::size_t>(chi) + 1] -
                                                     prefix[static_cast<std::size_t>(clo)]);
                } else {
                    long len = hi - lo + 1;
                    long wraps = len / n;
                    long rem = len % n;
                    acc = static_cast<T>(all * static_cast<T>(wraps));
                    long start = ((lo % n) + n) % n;
                    long end = start + rem - 1;
                    if (rem > 0) {
                        if (end < n) {
                            acc = static_cast<T>(acc + prefix[static_cast<std::size_t>(end) + 1] -
                                                 prefix[static_cast<std::size_t>(start)]);
                        } else {
                            acc = static_cast<T>(acc + all - prefix[static_cast<std::size_t>(start)] +
                                                 prefix[static_cast<std::size_t>(end - n) + 1]);
                        }
                    }
                }
                data[base + static_cast<std::size_t>(i) * stride] = acc;
            }
        }
    });
}

template <typename T, typename At>
void sat_into(ScalarField& out, const DiscreteKernel& k, int threads, At at) {
    const auto ob = out.box();
    std::vector<T> counts(out.values.size());
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = static_cast<T>(at(ob.coord(i)));
    for (int d = 0; d < k.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        window_axis(counts, ob, d, k.radius[sd],
                    out.domain.boundary[sd] == BoundaryMode::Periodic, threads);
    }
    const double w0 = k.weights[0];
    for (std::size_t i = 0; i < counts.size(); ++i)
        out.values[i] = static_cast<double>(counts[i]) * w0;
}

// ---- fft -----------------------------------------------------------------

long next_pow2(long n) {
    long p = 1;
    while (p < n) p <<= 1;
    return p;
}

template <typename At>
void fft_into(ScalarField& out, const DiscreteKernel& k, At at) {
    const int D = k.dim;
    const auto ob = out.box();
    std::vector<int> dims(static_cast<std::size_t>(D));
    std::vector<long> M(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (out.domain.boundary[sd] == BoundaryMode::Periodic) {
            M[sd] = out.domain.extent[sd];
        } else {
            // linear convolution: input extent + kernel diameter, rounded up
            M[sd] = next_pow2(out.domain.extent[sd] + 2 * k.radius[sd] + 1);
        }
        dims[sd] = static_cast<int>(M[sd]);
    }
    std::size_t real_n = 1, cplx_n = 1;
    for (int d = 0; d < D; ++d) {
        real_n *= static_cast<std::size_t>(M[static_cast<std::size_t>(d)]);
        cplx_n *= static_cast<std::size_t>(
            d == D - 1 ? M[static_cast<std::size_t>(d)] / 2 + 1 : M[static_cast<std::size_t>(d)]);
    }

    double* in_a = fftw_alloc_real(real_n);
    double* in_k = fftw_alloc_real(real_n);
    fftw_complex* sp_a = fftw_alloc_complex(cplx_n);
    fftw_complex* sp_k = fftw_alloc_complex(cplx_n);
    std::fill(in_a, in_a + real_n, 0.0);
    std::fill(in_k, in_k + real_n, 0.0);

    // Embed the input at array offset = grid coord - output origin (mod M).
    {
        const std::size_t n = ob.cell_count();
        std::vector<std::size_t> strides(static_cast<std::size_t>(D), 1);
        for (int d = D - 2; d >= 0; --d)
            strides[static_cast<std::size_t>(d)] =
                strides[static_cast<std::size_t>(d + 1)] *
                static_cast<std::size_t>(M[static_cast<std::size_t>(d + 1)]);
        for (std::size_t i = 0; i < n; ++i) {
            Coord z = ob.coord(i);
            double v = at(z);
            if (v == 0.0) continue;
            std::size_t idx = 0;
            for (int d = 0; d < D; ++d) {
                auto sd = static_cast<std::size_t>(d);
                long p = (z[sd] - ob.origin[sd]) % M[sd];
                idx += static_cast<std::size_t>(p) * strides[sd];
            }
            in_a[idx] = v;
        }
        // Kernel centered at 0, wrapped (aliasing folds when support exceeds
        // a periodic extent).
        const auto kb = k.box();
        const std::size_t kn = kb.cell_count();
        for (std::size_t i = 0; i < kn; ++i) {
            double w = k.weights[i];
            if (w == 0.0) continue;
            Coord z = kb.coord(i);
            std::size_t idx = 0;
            for (int d = 0; d < D; ++d) {
                auto sd = static_cast<std::size_t>(d);
                long p = ((z[sd] % M[sd]) + M[sd]) % M[sd];
                idx += static_cast<std::size_t>(p) * strides[sd];
            }
            in_k[idx] += w;
        }
    }

    fftw_plan pf_a, pf_k, pb;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        pf_a = fftw_plan_dft_r2c(D, dims.data(), in_a, sp_a, FFTW_ESTIMATE);
        pf_k = fftw_plan_dft_r2c(D, dims.data(), in_k, sp_k, FFTW_ESTIMATE);
        pb = fftw_plan_dft_c2r(D, dims.data(), sp_a, in_a, FFTW_ESTIMATE);
    }
    fftw_execute(pf_a);
    fftw_execute(pf_k);
    const double scale = 1.0 / static_cast<double>(real_n);
    for (std::size_t i = 0; i < cplx_n; ++i) {
        double re = sp_a[i][0] * sp_k[i][0] - sp_a[i][1] * sp_k[i][1];
        double im = sp_a[i][0] * sp_k[i][1] + sp_a[i][1] * sp_k[i][0];
        sp_a[i][0] = re * scale;
        sp_a[i][1] = im * scale;
    }
    fftw_execute(pb);

    {
        const std::size_t n = ob.cell_count();
        std::vector<std::size_t> strides(static_cast<std::size_t>(D), 1);
        for (int d = D - 2; d >= 0; --d)
            strides[static_cast<std::size_t>(d)] =
                strides[static_cast<std::size_t>(d + 1)] *
                static_cast<std::size_t>(M[static_cast<std::size_t>(d + 1)]);
        for (std::size_t i = 0; i < n; ++i) {
            Coord z = ob.coord(i);
            std::size_t idx = 0;
            for (int d = 0; d < D; ++d) {
                auto sd = static_cast<std::size_t>(d);
                long p = (((z[sd] - ob.origin[sd]) % M[sd]) + M[sd]) % M[sd];
                idx += static_cast<std::size_t>(p) * strides[sd];
            }
            out.values[i] = in_a[idx];
        }
    }

    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(pf_a);
        fftw_destroy_plan(pf_k);
        fftw_destroy_plan(pb);
    }
    fftw_free(in_a);
    fftw_free(in_k);
    fftw_free(sp_a);
    fftw_free(sp_k);
}

template <typename At>
ScalarField convolve_impl(const Domain& dom, const std::vector<long>& origin,
                          const DiscreteKernel& k, Backend backend, int threads, At at,
                          bool binary) {
    check_compat(dom, k);
    if (backend == Backend::Auto)
        backend = k.is_uniform_box() ? Backend::SummedArea : Backend::Fft;
    if (backend == Backend::SummedArea && !k.is_uniform_box())
        throw UnsupportedError("sat backend requires a uniform box kernel");
    threads = resolve_threads(threads);

    ScalarField out = make_output(dom, origin, k);
    switch (backend) {
        case Backend::Naive:
            naive_into(out, k, threads, at);
            break;
        case Backend::SummedArea:
            if (binary)
                sat_into<std::int64_t>(out, k, threads, at);
            else
                sat_into<double>(out, k, threads, at);
            break;
        case Backend::Fft:
            fft_into(out, k, at);
            break;
        case Backend::Auto:
            break;  // unreachable
    }
    return out;
}

}  // namespace

ScalarField convolve(const BinaryConfig& a, const DiscreteKernel& k, Backend backend,
                     int threads) {
    return convolve_impl(a.domain, a.origin, k, backend, threads,
                         [&](const Coord& z) { return static_cast<double>(a.at(z)); }, true);
}

ScalarField convolve(const ScalarField& f, const DiscreteKernel& k, Backend backend,
                     int threads) {
    return convolve_impl(f.domain, f.origin, k, backend, threads,
                         [&](const Coord& z) { return f.at(z); }, false);
}

YoungBoundReport young_bound_check(const BinaryConfig& a, const BinaryConfig& b,
                                   const DiscreteKernel& k) {
    require_compatible(a.domain, b.domain);
    ScalarField fa = convolve(a, k, Backend::Naive);
    ScalarField fb = convolve(b, k, Backend::Naive);
    // Union of the two output boxes; alpha reads 0 outside either.
    const auto ba = fa.box(), bb = fb.box();
    detail::Box ub;
    ub.origin.resize(ba.origin.size());
    ub.extent.resize(ba.origin.size());
    for (std::size_t d = 0; d < ba.origin.size(); ++d) {
        long lo = std::min(ba.origin[d], bb.origin[d]);
        long hi = std::max(ba.origin[d] + ba.extent[d], bb.origin[d] + bb.extent[d]);
        ub.origin[d] = lo;
        ub.extent[d] = hi - lo;
    }
    YoungBoundReport rep;
    const std::size_t n = ub.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = ub.coord(i);
        rep.lhs = std::max(rep.lhs, std::abs(fa.at(z) - fb.at(z)));
    }
    double epsD = a.domain.cell_measure();
    rep.rhs = k.max_weight() / epsD * l1_distance(a, b);
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

}  // namespace ltl

#include "spectra/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SPECTRA_HAVE_AVX2 1
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define SPECTRA_HAVE_NEON 1
#endif

namespace spectra::kernels {

namespace {

std::size_t count_scalar(const double* E, std::size_t n, double lambda) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(E[i] <= lambda) + static_cast<std::size_t>(E[i] < lambda);
    return c;
}

double sumw_scalar(const double* E, const double* w, std::size_t n, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * (static_cast<double>(E[i] <= lambda) + static_cast<double>(E[i] < lambda));
    return s;
}

void norm_scalar(const double* m0, const double* m1, std::size_t n, double k0, double k1, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = k0 + m0[i];
        double v = a * a;
        if (m1) {
            const double b = k1 + m1[i];
            v += b * b;
        }
        out[i] = v;
    }
}

std::complex<double> dot_scalar(const double* are, const double* aim, const double* pre, const double* pim, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += are[i] * pre[i] - aim[i] * pim[i];
        im += are[i] * pim[i] + aim[i] * pre[i];
    }
    return {re, im};
}

const Table kScalar{count_scalar, sumw_scalar, norm_scalar, dot_scalar, "scalar"};

#ifdef SPECTRA_HAVE_AVX2

__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) std::size_t count_avx2(const double* E, std::size_t n, double lambda) {
    const __m256d l = _mm256_set1_pd(lambda);
    // Mask lanes are all-ones (−1 as int64); subtracting accumulates counts.
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_loadu_pd(E + i);
        const __m256i le = _mm256_castpd_si256(_mm256_cmp_pd(e, l, _CMP_LE_OQ));
        const __m256i lt = _mm256_castpd_si256(_mm256_cmp_pd(e, l, _CMP_LT_OQ));
        acc = _mm256_sub_epi64(acc, _mm256_add_epi64(le, lt));
    }
    alignas(32) long long lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::size_t c = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    return c + count_scalar(E + i, n - i, lambda);
}

__attribute__((target("avx2,fma"))) double sumw_avx2(const double* E, const double* w, std::size_t n, double lambda) {
    const __m256d l = _mm256_set1_pd(lambda);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_loadu_pd(E + i);
        const __m256d f = _mm256_add_pd(_mm256_and_pd(_mm256_cmp_pd(e, l, _CMP_LE_OQ), one),
                                        _mm256_and_pd(_mm256_cmp_pd(e, l, _CMP_LT_OQ), one));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), f, acc);
    }
    return hsum(acc) + sumw_scalar(E + i, w + i, n - i, lambda);
}

__attribute__((target("avx2,fma"))) void norm_avx2(const double* m0, const double* m1, std::size_t n, double k0, double k1,
                                                   double* out) {
    const __m256d a0 = _mm256_set1_pd(k0);
    const __m256d a1 = _mm256_set1_pd(k1);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_add_pd(a0, _mm256_loadu_pd(m0 + i));
        __m256d v = _mm256_mul_pd(x, x);
        if (m1) {
            const __m256d y = _mm256_add_pd(a1, _mm256_loadu_pd(m1 + i));
            v = _mm256_fmadd_pd(y, y, v);
        }
        _mm256_storeu_pd(out + i, v);
    }
    norm_scalar(m0 + i, m1 ? m1 + i : nullptr, n - i, k0, k1, out + i);
}

__attribute__((target("avx2,fma"))) std::complex<double> dot_avx2(const double* are, const double* aim, const double* pre,
                                                                   const double* pim, std::size_t n) {
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ar = _mm256_loadu_pd(are + i);
        const __m256d ai = _mm256_loadu_pd(aim + i);
        const __m256d pr = _mm256_loadu_pd(pre + i);
        const __m256d pi = _mm256_loadu_pd(pim + i);
        re = _mm256_fmadd_pd(ar, pr, re);
        re = _mm256_fnmadd_pd(ai, pi, re);
        im = _mm256_fmadd_pd(ar, pi, im);
        im = _mm256_fmadd_pd(ai, pr, im);
    }
    const std::complex<double> tail = dot_scalar(are + i, aim + i, pre + i, pim + i, n - i);
    return {hsum(re) + tail.real(), hsum(im) + tail.imag()};
}

const Table kAvx2{count_avx2, sumw_avx2, norm_avx2, dot_avx2, "avx2"};

#endif

#ifdef SPECTRA_HAVE_NEON

std::size_t count_neon(const double* E, std::size_t n, double lambda) {
    const float64x2_t l = vdupq_n_f64(lambda);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t e = vld1q_f64(E + i);
        acc = vsubq_u64(acc, vcleq_f64(e, l));
        acc = vsubq_u64(acc, vcltq_f64(e, l));
    }
    return static_cast<std::size_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1)) + count_scalar(E + i, n - i, lambda);
}

double sumw_neon(const double* E, const double* w, std::size_t n, double lambda) {
    const float64x2_t l = vdupq_n_f64(lambda);
    const uint64x2_t one = vreinterpretq_u64_f64(vdupq_n_f64(1.0));
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t e = vld1q_f64(E + i);
        const float64x2_t f = vaddq_f64(vreinterpretq_f64_u64(vandq_u64(vcleq_f64(e, l), one)),
                                        vreinterpretq_f64_u64(vandq_u64(vcltq_f64(e, l), one)));
        acc = vfmaq_f64(acc, vld1q_f64(w + i), f);
    }
    return vaddvq_f64(acc) + sumw_scalar(E + i, w + i, n - i, lambda);
}

void norm_neon(const double* m0, const double* m1, std::size_t n, double k0, double k1, double* out) {
    const float64x2_t a0 = vdupq_n_f64(k0);
    const float64x2_t a1 = vdupq_n_f64(k1);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vaddq_f64(a0, vld1q_f64(m0 + i));
        float64x2_t v = vmulq_f64(x, x);
        if (m1) {
            const float64x2_t y = vaddq_f64(a1, vld1q_f64(m1 + i));
            v = vfmaq_f64(v, y, y);
        }
        vst1q_f64(out + i, v);
    }
    norm_scalar(m0 + i, m1 ? m1 + i : nullptr, n - i, k0, k1, out + i);
}

std::complex<double> dot_neon(const double* are, const double* aim, const double* pre, const double* pim, std::size_t n) {
    float64x2_t re = vdupq_n_f64(0.0);
    float64x2_t im = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t ar = vld1q_f64(are + i);
        const float64x2_t ai = vld1q_f64(aim + i);
        const float64x2_t pr = vld1q_f64(pre + i);
        const float64x2_t pi = vld1q_f64(pim + i);
        re = vfmaq_f64(re, ar, pr);
        re = vfmsq_f64(re, ai, pi);
        im = vfmaq_f64(im, ar, pi);
        im = vfmaq_f64(im, ai, pr);
    }
    const std::complex<double> tail = dot_scalar(are + i, aim + i, pre + i, pim + i, n - i);
    return {vaddvq_f64(re) + tail.real(), vaddvq_f64(im) + tail.imag()};
}

const Table kNeon{count_neon, sumw_neon, norm_neon, dot_neon, "neon"};

#endif

const Table& choose() {
    const char* env = std::getenv("SPECTRA_SIMD");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return kScalar;
    if (want == "avx2" && avx2_table()) return *avx2_table();
    if (want == "neon" && neon_table()) return *neon_table();
    if (auto* t = avx2_table()) return *t;
    if (auto* t = neon_table()) return *t;
    return kScalar;
}

}  // namespace

const Table& scalar_table() { return kScalar; }

const Table* avx2_table() {
#ifdef SPECTRA_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const Table* neon_table() {
#ifdef SPECTRA_HAVE_NEON
    return &kNeon;
#else
    return nullptr;
#endif
}

namespace {
std::atomic<const Table*> g_active{nullptr};
}

const Table& active() {
    const Table* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        const Table* chosen = &choose();
        g_active.compare_exchange_strong(t, chosen, std::memory_order_acq_rel);
        t = g_active.load(std::memory_order_acquire);
    }
    return *t;
}

bool select(const std::string& name) {
    const Table* t = name == "scalar" ? &kScalar : name == "avx2" ? avx2_table() : name == "neon" ? neon_table() : nullptr;
    if (name == "auto") t = &choose();
    if (!t) return false;
    g_active.store(t, std::memory_order_release);
    return true;
}

std::string active_name() { return active().name; }

}  // namespace spectra::kernels

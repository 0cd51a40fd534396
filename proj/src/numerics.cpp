#include "estsim/numerics.hpp"

#include "estsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace estsim::numerics {

namespace {

std::vector<double> clamp_to_box(std::vector<double> x, std::span<const double> lo,
                                 std::span<const double> hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

struct Simplex {
    std::vector<std::vector<double>> pts;
    std::vector<double> fv;
};

} // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x0, std::span<const double> step,
                               std::span<const double> lo, std::span<const double> hi,
                               const SimplexOptions& opts) {
    const std::size_t dim = x0.size();
    if (step.size() != dim || lo.size() != dim || hi.size() != dim)
        throw std::invalid_argument("simplex: inconsistent dimensions");

    SimplexResult res;
    res.evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evals;
        return f(x);
    };

    std::vector<double> best = clamp_to_box({x0.begin(), x0.end()}, lo, hi);
    double best_f = eval(best);
    std::vector<double> scale(step.begin(), step.end());

    for (int round = 0; round <= opts.restarts; ++round) {
        Simplex s;
        s.pts.push_back(best);
        s.fv.push_back(best_f);
        for (std::size_t i = 0; i < dim; ++i) {
            auto p = best;
            p[i] += scale[i];
            p = clamp_to_box(std::move(p), lo, hi);
            if (p[i] == best[i]) p[i] = std::clamp(best[i] - scale[i], lo[i], hi[i]);
            s.pts.push_back(p);
            s.fv.push_back(eval(p));
        }

        const std::size_t np = dim + 1;
        while (res.evals < opts.max_evals) {
            // order
            std::vector<std::size_t> idx(np);
            for (std::size_t i = 0; i < np; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return s.fv[a] < s.fv[b]; });
            Simplex ordered;
            for (auto i : idx) {
                ordered.pts.push_back(std::move(s.pts[i]));
                ordered.fv.push_back(s.fv[i]);
            }
            s = std::move(ordered);

            const double f_best = s.fv.front(), f_worst = s.fv.back();
            double diam = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                double span_i = 0.0;
                for (std::size_t p = 1; p < np; ++p)
                    span_i = std::max(span_i, std::abs(s.pts[p][i] - s.pts[0][i]));
                diam = std::max(diam, span_i);
            }
            if (std::abs(f_worst - f_best) <= opts.f_tol * (1.0 + std::abs(f_best)) &&
                diam <= opts.x_tol)
                break;

            std::vector<double> centroid(dim, 0.0);
            for (std::size_t p = 0; p + 1 < np; ++p)
                for (std::size_t i = 0; i < dim; ++i) centroid[i] += s.pts[p][i];
            for (auto& c : centroid) c /= static_cast<double>(dim);

            auto mix = [&](double coef) {
                std::vector<double> p(dim);
                for (std::size_t i = 0; i < dim; ++i)
                    p[i] = centroid[i] + coef * (s.pts.back()[i] - centroid[i]);
                return clamp_to_box(std::move(p), lo, hi);
            };

            auto refl = mix(-1.0);
            const double f_refl = eval(refl);
            if (f_refl < s.fv[0]) {
                auto exp_p = mix(-2.0);
                const double f_exp = eval(exp_p);
                if (f_exp < f_refl) {
                    s.pts.back() = std::move(exp_p);
                    s.fv.back() = f_exp;
                } else {
                    s.pts.back() = std::move(refl);
                    s.fv.back() = f_refl;
                }
            } else if (f_refl < s.fv[np - 2]) {
                s.pts.back() = std::move(refl);
                s.fv.back() = f_refl;
            } else {
                auto con = mix(f_refl < s.fv.back() ? -0.5 : 0.5);
                const double f_con = eval(con);
                if (f_con < std::min(f_refl, s.fv.back())) {
                    s.pts.back() = std::move(con);
                    s.fv.back() = f_con;
                } else {
                    for (std::size_t p = 1; p < np; ++p) {
                        for (std::size_t i = 0; i < dim; ++i)
                            s.pts[p][i] = s.pts[0][i] + 0.5 * (s.pts[p][i] - s.pts[0][i]);
                        s.fv[p] = eval(s.pts[p]);
                    }
                }
            }
        }

        std::size_t ib = 0;
        for (std::size_t p = 1; p < np; ++p)
            if (s.fv[p] < s.fv[ib]) ib = p;
        if (s.fv[ib] < best_f) {
            best_f = s.fv[ib];
            best = s.pts[ib];
        }
        for (auto& sc : scale) sc *= 0.1;
        if (res.evals >= opts.max_evals) break;
    }

    res.x = std::move(best);
    res.fval = best_f;
    res.converged = res.evals < opts.max_evals;
    return res;
}

namespace {

template <class T>
Histogram1D make_histogram_impl(std::span<const T> values, std::size_t bins, double lo,
                                double hi) {
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    if (!(hi > lo)) hi = lo + 1.0;
    Histogram1D h;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0.0);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + w * static_cast<double>(i);
    for (T v : values) {
        auto k = static_cast<long>(std::floor((static_cast<double>(v) - lo) / w));
        k = std::clamp<long>(k, 0, static_cast<long>(bins) - 1);
        h.counts[static_cast<std::size_t>(k)] += 1.0;
    }
    return h;
}

} // namespace

Histogram1D make_histogram(std::span<const double> values, std::size_t bins, double lo,
                           double hi) {
    return make_histogram_impl(values, bins, lo, hi);
}
Histogram1D make_histogram(std::span<const float> values, std::size_t bins, double lo,
                           double hi) {
    return make_histogram_impl(values, bins, lo, hi);
}

ExponentialFit fit_exponential(std::span<const double> centers,
                               std::span<const double> counts, double tau0) {
    if (centers.size() != counts.size() || centers.size() < 3)
        throw std::invalid_argument("exponential fit needs >= 3 bins");
    double a0 = *std::max_element(counts.begin(), counts.end());
    const double x0[2] = {a0, tau0};
    const double step[2] = {0.3 * a0 + 1.0, 0.3 * tau0};
    const double lo[2] = {0.0, 1e-9};
    const double hi[2] = {1e18, 1e12};
    auto obj = [&](std::span<const double> p) {
        double ss = 0.0;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const double d = p[0] * std::exp(-centers[i] / p[1]) - counts[i];
            ss += d * d;
        }
        return ss;
    };
    const auto r = minimize_simplex(obj, x0, step, lo, hi);
    return {r.x[1], r.x[0], r.converged};
}

double dft_peak_frequency_mhz(std::span<const double> times_ns,
                              std::span<const double> values, double f_lo_mhz,
                              double f_hi_mhz, std::size_t n_grid) {
    if (times_ns.size() != values.size() || times_ns.size() < 3)
        throw std::invalid_argument("dft peak needs >= 3 samples");
    const double m = mean(values);
    double best_f = f_lo_mhz, best_p = -1.0;
    for (std::size_t k = 0; k < n_grid; ++k) {
        const double f =
            f_lo_mhz + (f_hi_mhz - f_lo_mhz) * static_cast<double>(k) /
                           static_cast<double>(n_grid - 1);
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < times_ns.size(); ++j) {
            const double ph = units::kTwoPi * f * times_ns[j] * 1e-3;
            re += (values[j] - m) * std::cos(ph);
            im += (values[j] - m) * std::sin(ph);
        }
        const double p = re * re + im * im;
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }
    return best_f;
}

EnvelopeFit fit_oscillation_envelope(std::span<const double> times_ns,
                                     std::span<const double> values,
                                     double freq_hint_mhz) {
    if (times_ns.size() != values.size() || times_ns.size() < 6)
        throw std::invalid_argument("envelope fit needs >= 6 samples");
    auto model = [&](std::span<const double> p, double t) {
        const double amp = p[0], off = p[1], t2 = p[2], f = p[3];
        const double env = std::exp(-(t / t2) * (t / t2));
        return off + amp * (1.0 - env * std::cos(units::kTwoPi * f * t * 1e-3));
    };
    auto obj = [&](std::span<const double> p) {
        double ss = 0.0;
        for (std::size_t j = 0; j < times_ns.size(); ++j) {
            const double d = model(p, times_ns[j]) - values[j];
            ss += d * d;
        }
        return ss;
    };
    const double vmax = *std::max_element(values.begin(), values.end());
    const double vmin = *std::min_element(values.begin(), values.end());
    const double x0[4] = {0.5 * (vmax - vmin), vmin, 15.0, freq_hint_mhz};
    const double step[4] = {0.2 * (vmax - vmin) + 1e-3, 0.1 * (vmax - vmin) + 1e-3, 5.0,
                            0.02 * freq_hint_mhz + 0.1};
    const double lo[4] = {0.0, -1e6, 0.1, 0.5 * freq_hint_mhz};
    const double hi[4] = {1e6, 1e6, 1e6, 1.5 * freq_hint_mhz};
    const auto r = minimize_simplex(obj, x0, step, lo, hi);
    EnvelopeFit fit;
    fit.amplitude = r.x[0];
    fit.offset = r.x[1];
    fit.t2_star_ns = r.x[2];
    fit.freq_mhz = r.x[3];
    fit.residual = r.fval;
    fit.converged = r.converged;
    return fit;
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term =
            2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
    const auto n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double c = cdf(sorted_samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(c - lo), std::abs(c - hi)});
    }
    return d;
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

} // namespace estsim::numerics

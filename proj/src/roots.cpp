#include "dshell/roots.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "dshell/error.hpp"
#include "dshell/parallel.hpp"

namespace dshell::roots {

namespace {

bool opposite_signs(double a, double b) { return (a < 0.0) != (b < 0.0); }

}  // namespace

RefineResult refine_bracketed(const std::function<double(double)>& f, Bracket bracket,
                              double f_lo, double f_hi, const RefineOptions& options) {
    if (!(bracket.lo < bracket.hi) || !(f_lo * f_hi < 0.0)) {
        throw DomainError("refine_bracketed: bracket must be ordered with a sign change");
    }
    RefineResult result;
    result.initial = bracket;

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = f_lo;
    double fb = f_hi;
    bool force_bisect = false;

    auto finish = [&](double x, double fx, bool converged) {
        result.root = x;
        result.residual = fx;
        result.final_bracket = {a, b};
        result.converged = converged;
        return result;
    };

    for (;;) {
        if (b - a <= options.bracket_tol) {
            const double mid = a + 0.5 * (b - a);
            const double fm = f(mid);
            ++result.evaluations;
            if (std::abs(fm) <= options.residual_tol) {
                return finish(mid, fm, true);
            }
            if (mid <= a || mid >= b || result.iterations >= options.max_iterations) {
                return finish(mid, fm, false);
            }
            // narrow enough but residual still too large: keep bisecting
            if (opposite_signs(fa, fm)) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
            ++result.iterations;
            continue;
        }
        if (result.iterations >= options.max_iterations) {
            const double mid = a + 0.5 * (b - a);
            const double fm = f(mid);
            ++result.evaluations;
            return finish(mid, fm, false);
        }

        const double width = b - a;
        double x = a + 0.5 * width;
        bool secant = false;
        if (!force_bisect) {
            const double candidate = b - fb * (b - a) / (fb - fa);
            const double guard = 1e-3 * width;
            if (candidate > a + guard && candidate < b - guard) {
                x = candidate;
                secant = true;
            }
        }
        const double fx = f(x);
        ++result.evaluations;
        ++result.iterations;
        if (fx == 0.0) {
            a = x;
            b = x;
            return finish(x, fx, true);
        }
        if (opposite_signs(fa, fx)) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        // secant steps that do not at least halve the bracket stagnate
        force_bisect = secant && (b - a) > 0.5 * width;
    }
}

RefineResult refine_bracketed(const std::function<double(double)>& f, Bracket bracket,
                              const RefineOptions& options) {
    const double f_lo = f(bracket.lo);
    const double f_hi = f(bracket.hi);
    RefineResult r = refine_bracketed(f, bracket, f_lo, f_hi, options);
    r.evaluations += 2;
    return r;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo < hi)) {
        throw DomainError("uniform_grid: need lo < hi and at least two points");
    }
    std::vector<double> xs(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + step * i;
    }
    xs.back() = hi;
    return xs;
}

namespace {

struct SignChange {
    std::size_t cell;  // bracket is [x[cell], x[cell + 1]], or an exact zero at x[cell]
    bool exact;
};

std::vector<SignChange> sign_changes(const std::vector<double>& fs, double max_jump) {
    std::vector<SignChange> out;
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        if (fs[i] == 0.0) {
            out.push_back({i, true});
            continue;
        }
        if (fs[i + 1] != 0.0 && fs[i] * fs[i + 1] < 0.0 &&
            std::abs(fs[i + 1] - fs[i]) <= max_jump) {
            out.push_back({i, false});
        }
    }
    if (!fs.empty() && fs.back() == 0.0) {
        out.push_back({fs.size() - 1, true});
    }
    return out;
}

bool has_close_pair(const std::vector<SignChange>& changes) {
    for (std::size_t k = 1; k < changes.size(); ++k) {
        if (changes[k].cell - changes[k - 1].cell < 2) {
            return true;
        }
    }
    return false;
}

}  // namespace

ScanResult find_roots(const std::function<double(double)>& f, double lo, double hi,
                      const ScanOptions& options) {
    ScanResult result;
    int points = options.points;
    std::vector<double> xs = uniform_grid(lo, hi, points);
    std::vector<double> fs = parallel::evaluate(xs, f, options.parallel);
    std::vector<SignChange> changes = sign_changes(fs, options.max_jump);

    if (has_close_pair(changes) && options.refine_factor > 1) {
        points = (points - 1) * options.refine_factor + 1;
        xs = uniform_grid(lo, hi, points);
        fs = parallel::evaluate(xs, f, options.parallel);
        changes = sign_changes(fs, options.max_jump);
        result.densified = true;
    }
    result.points_used = points;
    result.close_roots = has_close_pair(changes);

    for (const SignChange& c : changes) {
        if (c.exact) {
            RefineResult r;
            r.root = xs[c.cell];
            r.residual = 0.0;
            r.initial = {xs[c.cell], xs[c.cell]};
            r.final_bracket = r.initial;
            r.converged = true;
            result.roots.push_back(r);
            continue;
        }
        const Bracket bracket{xs[c.cell], xs[c.cell + 1]};
        RefineResult r = refine_bracketed(f, bracket, fs[c.cell], fs[c.cell + 1], options.refine);
        if (!r.converged) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "root refinement did not converge after " << r.iterations
                << " iterations; final bracket [" << r.final_bracket.lo << ", "
                << r.final_bracket.hi << "], residual " << r.residual;
            throw ConvergenceError(msg.str());
        }
        result.roots.push_back(r);
    }
    return result;
}

}  // namespace dshell::roots

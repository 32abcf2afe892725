#include "pseudohopf/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <queue>

#include "pseudohopf/error.hpp"

namespace pseudohopf {

Root brent_root(const std::function<double(double)>& f, double a, double b,
                const RootOptions& opt) {
    return brent_root(f, a, b, f(a), f(b), opt);
}

Root brent_root(const std::function<double(double)>& f, double a, double b,
                double fa, double fb, const RootOptions& opt) {
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw NumericalError("brent_root: non-finite bracket values");
    if (fa == 0.0) return {a, fa, a, a, 0};
    if (fb == 0.0) return {b, fb, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw InvalidArgument("brent_root: endpoints do not bracket a root");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa, d = b - a, e = d;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * opt.x_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0 || std::abs(fb) <= opt.f_tol) break;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (!std::isfinite(fb)) throw NumericalError("brent_root: non-finite function value");
    }
    return {b, fb, std::min(b, c), std::max(b, c), it};
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double x_tol, int max_iter) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - g * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + g * (b - a); f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    const double value = kron * h;
    const double error = std::abs((kron - gauss) * h);
    if (!std::isfinite(value)) throw NumericalError("integrate: non-finite integrand");
    return {a, b, value, error};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_subdivisions) {
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value, err = first.error;
    heap.push(first);
    int evals = 15;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= max_subdivisions)
            throw NumericalError("integrate: subdivision limit reached");
        Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        Segment l = gk15(f, s.a, mid), r = gk15(f, mid, s.b);
        evals += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed accumulated rounding from the running updates.
    double sum = 0.0, esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, evals};
}

std::vector<double> geomspace(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0) || n < 2) throw InvalidArgument("geomspace: need a, b > 0 and n >= 2");
    std::vector<double> out(static_cast<size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

LinearFit least_squares(std::span<const double> design, int cols, std::span<const double> rhs) {
    const auto rows = static_cast<Eigen::Index>(rhs.size());
    if (cols <= 0 || static_cast<Eigen::Index>(design.size()) != rows * cols || rows < cols)
        throw InvalidArgument("least_squares: inconsistent dimensions");
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = design[static_cast<size_t>(i * cols + j)];
        y(i) = rhs[static_cast<size_t>(i)];
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - A * sol;
    LinearFit out;
    out.coeffs.assign(sol.data(), sol.data() + sol.size());
    out.residuals.assign(res.data(), res.data() + res.size());
    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).square().sum();
    const double ss_res = res.squaredNorm();
    out.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    return out;
}

Line fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need >= 2 paired samples");
    std::vector<double> design;
    design.reserve(2 * x.size());
    for (double xi : x) {
        design.push_back(1.0);
        design.push_back(xi);
    }
    LinearFit lf = least_squares(design, 2, y);
    return {lf.coeffs[0], lf.coeffs[1], lf.r_squared, std::move(lf.residuals)};
}

}  // namespace pseudohopf

#include "floqfric/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace floqfric {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
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

struct Panel {
    double a;
    double b;
    Eigen::VectorXd value;
    Eigen::VectorXd error;
    double priority;  // largest error / group tolerance
};

}  // namespace

void gauss_kronrod_15(const VectorIntegrand& f, double a, double b, Eigen::VectorXd& value,
                      Eigen::VectorXd& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const Eigen::VectorXd fc = f(center);
    Eigen::VectorXd kronrod = kWgk[7] * fc;
    Eigen::VectorXd gauss = kWg[3] * fc;
    Eigen::VectorXd mean_abs = Eigen::VectorXd::Zero(fc.size());
    std::array<Eigen::VectorXd, 15> samples;
    samples[7] = fc;

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        Eigen::VectorXd f1 = f(center - dx);
        Eigen::VectorXd f2 = f(center + dx);
        if (f1.size() != fc.size() || f2.size() != fc.size()) {
            throw std::invalid_argument("integrate_adaptive: integrand changed dimension");
        }
        kronrod += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
        samples[static_cast<std::size_t>(j)] = std::move(f1);
        samples[static_cast<std::size_t>(14 - j)] = std::move(f2);
    }

    // QUADPACK error heuristic, applied per component.
    const Eigen::VectorXd reskh = 0.5 * kronrod;
    Eigen::VectorXd resasc = kWgk[7] * (fc - reskh).cwiseAbs();
    for (int j = 0; j < 7; ++j) {
        const auto& lo = samples[static_cast<std::size_t>(j)];
        const auto& hi = samples[static_cast<std::size_t>(14 - j)];
        resasc += kWgk[static_cast<std::size_t>(j)] *
                  ((lo - reskh).cwiseAbs() + (hi - reskh).cwiseAbs());
        mean_abs += kWgk[static_cast<std::size_t>(j)] * (lo.cwiseAbs() + hi.cwiseAbs());
    }
    mean_abs += kWgk[7] * fc.cwiseAbs();

    value = half * kronrod;
    error.resize(value.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index c = 0; c < value.size(); ++c) {
        double err = std::abs(half * (kronrod(c) - gauss(c)));
        const double asc = std::abs(half) * resasc(c);
        if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
        const double abs_int = std::abs(half) * mean_abs(c);
        if (abs_int > std::numeric_limits<double>::min() / (50.0 * eps)) {
            err = std::max(err, 50.0 * eps * abs_int);
        }
        error(c) = err;
    }
}

QuadratureResult integrate_adaptive(const VectorIntegrand& f, double a, double b,
                                    const QuadratureOptions& options) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: require b > a");
    const int initial = std::max(1, options.initial_panels);

    std::vector<Panel> panels;
    panels.reserve(static_cast<std::size_t>(initial + 2 * options.max_subdivisions));
    QuadratureResult result;

    auto evaluate_panel = [&](double lo, double hi) {
        Panel p{lo, hi, {}, {}, 0.0};
        gauss_kronrod_15(f, lo, hi, p.value, p.error);
        result.evaluations += 15;
        panels.push_back(std::move(p));
    };

    const double width = (b - a) / initial;
    for (int i = 0; i < initial; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == initial) ? b : a + (i + 1) * width;
        evaluate_panel(lo, hi);
    }

    const Eigen::Index dim = panels.front().value.size();
    std::vector<int> group = options.groups;
    if (group.empty()) group.assign(static_cast<std::size_t>(dim), 0);
    if (static_cast<Eigen::Index>(group.size()) != dim) {
        throw std::invalid_argument("integrate_adaptive: group list does not match integrand size");
    }
    const int n_groups = *std::max_element(group.begin(), group.end()) + 1;

    std::vector<bool> active(panels.size(), true);
    Eigen::VectorXd total(dim);
    Eigen::VectorXd total_err(dim);
    std::vector<double> tol(static_cast<std::size_t>(n_groups));

    auto refresh = [&]() {
        total.setZero();
        total_err.setZero();
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (!active[i]) continue;
            total += panels[i].value;
            total_err += panels[i].error;
        }
        std::vector<double> scale(static_cast<std::size_t>(n_groups), 0.0);
        for (Eigen::Index c = 0; c < dim; ++c) {
            auto& s = scale[static_cast<std::size_t>(group[static_cast<std::size_t>(c)])];
            s = std::max(s, std::abs(total(c)));
        }
        for (int g = 0; g < n_groups; ++g) {
            tol[static_cast<std::size_t>(g)] =
                std::max(options.abs_tol, options.rel_tol * scale[static_cast<std::size_t>(g)]);
        }
        bool done = true;
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (total_err(c) > tol[static_cast<std::size_t>(group[static_cast<std::size_t>(c)])]) {
                done = false;
            }
        }
        return done;
    };

    auto priority = [&](const Panel& p) {
        double worst = 0.0;
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double t = tol[static_cast<std::size_t>(group[static_cast<std::size_t>(c)])];
            worst = std::max(worst, p.error(c) / std::max(t, std::numeric_limits<double>::min()));
        }
        return worst;
    };

    bool done = refresh();
    int subdivisions = 0;
    while (!done && subdivisions < options.max_subdivisions) {
        // Tolerances move as the estimate improves; re-rank every pass.
        std::size_t worst = 0;
        double worst_priority = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (!active[i]) continue;
            panels[i].priority = priority(panels[i]);
            if (panels[i].priority > worst_priority) {
                worst_priority = panels[i].priority;
                worst = i;
            }
        }
        const double lo = panels[worst].a;
        const double hi = panels[worst].b;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // cannot split further
        active[worst] = false;
        evaluate_panel(lo, mid);
        evaluate_panel(mid, hi);
        active.push_back(true);
        active.push_back(true);
        ++subdivisions;
        done = refresh();
    }

    result.value = total;
    result.error = total_err;
    result.panels = static_cast<int>(std::count(active.begin(), active.end(), true));
    result.converged = done;
    return result;
}

}  // namespace floqfric

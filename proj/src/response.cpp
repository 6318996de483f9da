// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/response.hpp"

#include <cmath>

namespace bfd {

namespace {

// alpha1 + j beta1 = B, alpha2 + j beta2 = sum x_{nl} k_nl e^{j omega k_nl};
// the group delay is -(a1*a2 + b1*b2) / (a1^2 + b1^2).
struct DelayTerms {
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
};

DelayTerms delay_terms(const ArrayGeometry& geom, const FilterBank& x,
                       double omega, double theta) {
    DelayTerms t;
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < len; ++l) {
            const double k = -a_n - static_cast<double>(l);
            const double c = std::cos(omega * k);
            const double s = std::sin(omega * k);
            const double v = x(n, l);
            t.a1 += v * c;
            t.b1 += v * s;
            t.a2 += v * k * c;
            t.b2 += v * k * s;
        }
    }
    return t;
}

double delay_guard(const FilterBank& x) {
    return 1e-12 * x.flatten().squaredNorm();
}

}  // namespace

double phase_slope(const ArrayGeometry& geom, int n, int l, double theta) {
    return -geom.delay_samples(n, theta) - static_cast<double>(l);
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, int filter_length,
                                 double omega, double theta) {
    const int n_ch = geom.num_elements();
    Eigen::VectorXcd g(static_cast<Eigen::Index>(n_ch) * filter_length);
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < filter_length; ++l) {
            const double phase = omega * (-a_n - static_cast<double>(l));
            g[flat_index(n, l, filter_length)] =
                Complex(std::cos(phase), std::sin(phase));
        }
    }
    return g;
}

Complex response(const ArrayGeometry& geom, const FilterBank& x, double omega,
                 double theta) {
    Complex b(0.0, 0.0);
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        Complex acc(0.0, 0.0);
        for (int l = 0; l < len; ++l) {
            const double phase = -omega * static_cast<double>(l);
            acc += x(n, l) * Complex(std::cos(phase), std::sin(phase));
        }
        const double ph_n = -omega * a_n;
        b += Complex(std::cos(ph_n), std::sin(ph_n)) * acc;
    }
    return b;
}

Eigen::VectorXcd channel_responses(const FilterBank& x, double omega) {
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    Eigen::VectorXcd f(n_ch);
    for (int n = 0; n < n_ch; ++n) {
        Complex acc(0.0, 0.0);
        for (int l = 0; l < len; ++l) {
            const double phase = -omega * static_cast<double>(l);
            acc += x(n, l) * Complex(std::cos(phase), std::sin(phase));
        }
        f[n] = acc;
    }
    return f;
}

double white_noise_gain(const ArrayGeometry& geom, const FilterBank& x,
                        double omega, double theta_d) {
    const Eigen::VectorXcd f = channel_responses(x, omega);
    const double denom = f.squaredNorm();
    if (denom <= 1e-300)
        throw ZeroFilterEnergy("white_noise_gain: all filters null at omega");
    const Complex b = response(geom, x, omega, theta_d);
    return std::norm(b) / denom;
}

double group_delay(const ArrayGeometry& geom, const FilterBank& x, double omega,
                   double theta) {
    const DelayTerms t = delay_terms(geom, x, omega, theta);
    const double denom = t.a1 * t.a1 + t.b1 * t.b1;
    if (denom < delay_guard(x))
        throw NearZeroResponse("group_delay: response magnitude below guard");
    return -(t.a1 * t.a2 + t.b1 * t.b2) / denom;
}

Eigen::VectorXd group_delay_gradient(const ArrayGeometry& geom,
                                     const FilterBank& x, double omega,
                                     double theta) {
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    const DelayTerms t = delay_terms(geom, x, omega, theta);
    const double denom = t.a1 * t.a1 + t.b1 * t.b1;
    if (denom < delay_guard(x))
        throw NearZeroResponse("group_delay_gradient: response below guard");
    const double num = t.a1 * t.a2 + t.b1 * t.b2;

    Eigen::VectorXd grad(static_cast<Eigen::Index>(n_ch) * len);
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < len; ++l) {
            const double k = -a_n - static_cast<double>(l);
            const double c = std::cos(omega * k);
            const double s = std::sin(omega * k);
            // d(num) and d(denom) w.r.t. x_{nl}; tau = -num/denom.
            const double dnum = t.a2 * c + t.a1 * k * c + t.b2 * s + t.b1 * k * s;
            const double dden = 2.0 * (t.a1 * c + t.b1 * s);
            grad[flat_index(n, l, len)] = -(dnum * denom - num * dden) /
                                          (denom * denom);
        }
    }
    return grad;
}

ValueGradient magsq_error_gradient(const ArrayGeometry& geom,
                                   const FilterBank& x, double omega,
                                   double theta, double bd_magsq) {
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    const Complex b = response(geom, x, omega, theta);
    ValueGradient out;
    out.value = std::norm(b) - bd_magsq;
    out.gradient.resize(static_cast<Eigen::Index>(n_ch) * len);
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < len; ++l) {
            const double phase = omega * (-a_n - static_cast<double>(l));
            out.gradient[flat_index(n, l, len)] =
                2.0 * (b.real() * std::cos(phase) + b.imag() * std::sin(phase));
        }
    }
    return out;
}

ValueGradient wng_error_gradient(const ArrayGeometry& geom, const FilterBank& x,
                                 double omega, double theta_d, double floor) {
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    const Eigen::VectorXcd f = channel_responses(x, omega);
    const double denom = f.squaredNorm();
    if (denom <= 1e-300)
        throw ZeroFilterEnergy("wng_error_gradient: all filters null at omega");
    const Complex b = response(geom, x, omega, theta_d);
    const double num = std::norm(b);

    ValueGradient out;
    out.value = num / denom - floor;
    out.gradient.resize(static_cast<Eigen::Index>(n_ch) * len);
    for (int n = 0; n < n_ch; ++n) {
        const double a_n = geom.delay_samples(n, theta_d);
        for (int l = 0; l < len; ++l) {
            const double phase = omega * (-a_n - static_cast<double>(l));
            const double dnum =
                2.0 * (b.real() * std::cos(phase) + b.imag() * std::sin(phase));
            const double lphase = -omega * static_cast<double>(l);
            const double dden = 2.0 * (f[n].real() * std::cos(lphase) +
                                       f[n].imag() * std::sin(lphase));
            out.gradient[flat_index(n, l, len)] =
                (dnum * denom - num * dden) / (denom * denom);
        }
    }
    return out;
}

Eigen::MatrixXcd wng_matrix(const ArrayGeometry& geom, int filter_length,
                            double omega) {
    const int n_ch = geom.num_elements();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(
        n_ch, static_cast<Eigen::Index>(n_ch) * filter_length);
    for (int n = 0; n < n_ch; ++n) {
        for (int l = 0; l < filter_length; ++l) {
            const double phase = -omega * static_cast<double>(l);
            a(n, flat_index(n, l, filter_length)) =
                Complex(std::cos(phase), std::sin(phase));
        }
    }
    return a;
}

GridEvaluation evaluate_grid(const ArrayGeometry& geom, const FilterBank& x,
                             const Eigen::VectorXd& omegas,
                             const Eigen::VectorXd& thetas,
                             bool want_group_delay) {
    const int n_ch = x.num_channels();
    const int len = x.filter_length();
    const Eigen::Index n_om = omegas.size();
    const Eigen::Index n_th = thetas.size();
    const double guard = delay_guard(x);

    GridEvaluation out;
    out.response.resize(n_om, n_th);
    if (want_group_delay) {
        out.group_delay.setConstant(n_om, n_th,
                                    std::numeric_limits<double>::quiet_NaN());
        out.delay_valid.setConstant(n_om, n_th, false);
    }

    Eigen::VectorXcd f(n_ch), fm(n_ch);
    Eigen::VectorXd a_n(n_ch);
    for (Eigen::Index m = 0; m < n_om; ++m) {
        const double omega = omegas[m];
        // Per-channel response F_n and first tap moment sum_l l x_{nl} e^{-jwl}.
        for (int n = 0; n < n_ch; ++n) {
            Complex acc(0.0, 0.0), acc_m(0.0, 0.0);
            for (int l = 0; l < len; ++l) {
                const double phase = -omega * static_cast<double>(l);
                const Complex e(std::cos(phase), std::sin(phase));
                acc += x(n, l) * e;
                acc_m += x(n, l) * static_cast<double>(l) * e;
            }
            f[n] = acc;
            fm[n] = acc_m;
        }
        for (Eigen::Index kk = 0; kk < n_th; ++kk) {
            const double theta = thetas[kk];
            Complex b(0.0, 0.0), d2(0.0, 0.0);
            for (int n = 0; n < n_ch; ++n) {
                const double an = geom.delay_samples(n, theta);
                const double phase = -omega * an;
                const Complex e(std::cos(phase), std::sin(phase));
                b += e * f[n];
                if (want_group_delay) d2 += e * (-an * f[n] - fm[n]);
            }
            out.response(m, kk) = b;
            if (want_group_delay) {
                const double denom = std::norm(b);
                if (denom >= guard) {
                    // d2 = alpha2 + j beta2.
                    out.group_delay(m, kk) =
                        -(b.real() * d2.real() + b.imag() * d2.imag()) / denom;
                    out.delay_valid(m, kk) = true;
                } else {
                    ++out.num_guard_skips;
                }
            }
        }
    }
    return out;
}

Eigen::MatrixXcd response_grid(const ArrayGeometry& geom, const FilterBank& x,
                               const Eigen::VectorXd& omegas,
                               const Eigen::VectorXd& thetas) {
    return evaluate_grid(geom, x, omegas, thetas, false).response;
}

}  // namespace bfd

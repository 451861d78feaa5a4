#include "bkm/ode.hpp"
#include "bkm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bkm {

using Eigen::VectorXd;

namespace {

constexpr double machine_eps = 2.220446049250313e-16;

struct Dopri5 {
    static constexpr int order_exp = 5;
    static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
    static constexpr double a21 = 0.2, a31 = 3.0 / 40.0, a32 = 9.0 / 40.0,
        a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0,
        a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
        a54 = -212.0 / 729.0, a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0,
        a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
        e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0,
        e7 = -1.0 / 40.0;

    VectorXd k1, k2, k3, k4, k5, k6, k7;
    bool have_k1 = false;

    // one attempted step; returns scaled error norm, fills y1
    double attempt(const OdeRhs& f, double t, const VectorXd& y, double h,
                   VectorXd& y1, double atol, double rtol) {
        if (!have_k1) {
            k1 = f(t, y);
            have_k1 = true;
        }
        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f(t + h, y1);
        const VectorXd e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y1(i)));
            err += (e(i) / sc) * (e(i) / sc);
        }
        return std::sqrt(err / static_cast<double>(y.size()));
    }

    void accept() { k1 = k7; }   // FSAL
};

struct Dop853 {
    static constexpr int order_exp = 8;
    // Dormand-Prince 8(5,3) nodes, matrix, weights, error coefficients
    static constexpr double c2 = 0.526001519587677318785587544488e-01;
    static constexpr double c3 = 0.789002279381515978178381316732e-01;
    static constexpr double c4 = 0.118350341907227396726757197510e+00;
    static constexpr double c5 = 0.281649658092772603273242802490e+00;
    static constexpr double c6 = 0.333333333333333333333333333333e+00;
    static constexpr double c7 = 0.25e+00;
    static constexpr double c8 = 0.307692307692307692307692307692e+00;
    static constexpr double c9 = 0.651282051282051282051282051282e+00;
    static constexpr double c10 = 0.6e+00;
    static constexpr double c11 = 0.857142857142857142857142857142e+00;
    static constexpr double a21 = 5.26001519587677318785587544488e-2;
    static constexpr double a31 = 1.97250569845378994544595329183e-2;
    static constexpr double a32 = 5.91751709536136983633785987549e-2;
    static constexpr double a41 = 2.95875854768068491816892993775e-2;
    static constexpr double a43 = 8.87627564304205475450678981324e-2;
    static constexpr double a51 = 2.41365134159266685502369798665e-1;
    static constexpr double a53 = -8.84549479328286085344864962717e-1;
    static constexpr double a54 = 9.24834003261792003115737966543e-1;
    static constexpr double a61 = 3.7037037037037037037037037037e-2;
    static constexpr double a64 = 1.70828608729473871279604482173e-1;
    static constexpr double a65 = 1.25467687566822425016691814123e-1;
    static constexpr double a71 = 3.7109375e-2;
    static constexpr double a74 = 1.70252211019544039314978060272e-1;
    static constexpr double a75 = 6.02165389804559606850219397283e-2;
    static constexpr double a76 = -1.7578125e-2;
    static constexpr double a81 = 3.70920001185047927108779319836e-2;
    static constexpr double a84 = 1.70383925712239993810214054705e-1;
    static constexpr double a85 = 1.07262030446373284651809199168e-1;
    static constexpr double a86 = -1.53194377486244017527936158236e-2;
    static constexpr double a87 = 8.27378916381402288758473766002e-3;
    static constexpr double a91 = 6.24110958716075717114429577812e-1;
    static constexpr double a94 = -3.36089262944694129406857109825e0;
    static constexpr double a95 = -8.68219346841726006818189891453e-1;
    static constexpr double a96 = 2.75920996994467083049415600797e1;
    static constexpr double a97 = 2.01540675504778934086186788979e1;
    static constexpr double a98 = -4.34898841810699588477366255144e1;
    static constexpr double a101 = 4.77662536438264365890433908527e-1;
    static constexpr double a104 = -2.48811461997166764192642586468e0;
    static constexpr double a105 = -5.90290826836842996371446475743e-1;
    static constexpr double a106 = 2.12300514481811942347288949897e1;
    static constexpr double a107 = 1.52792336328824235832596922938e1;
    static constexpr double a108 = -3.32882109689848629194453265587e1;
    static constexpr double a109 = -2.03312017085086261358222928593e-2;
    static constexpr double a111 = -9.3714243008598732571704021658e-1;
    static constexpr double a114 = 5.18637242884406370830023853209e0;
    static constexpr double a115 = 1.09143734899672957818500254654e0;
    static constexpr double a116 = -8.14978701074692612513997267357e0;
    static constexpr double a117 = -1.85200656599969598641566180701e1;
    static constexpr double a118 = 2.27394870993505042818970056734e1;
    static constexpr double a119 = 2.49360555267965238987089396762e0;
    static constexpr double a1110 = -3.0467644718982195003823669022e0;
    static constexpr double a121 = 2.27331014751653820792359768449e0;
    static constexpr double a124 = -1.05344954667372501984066689879e1;
    static constexpr double a125 = -2.00087205822486249909675718444e0;
    static constexpr double a126 = -1.79589318631187989172765950534e1;
    static constexpr double a127 = 2.79488845294199600508499808837e1;
    static constexpr double a128 = -2.85899827713502369474065508674e0;
    static constexpr double a129 = -8.87285693353062954433549289258e0;
    static constexpr double a1210 = 1.23605671757943030647266201528e1;
    static constexpr double a1211 = 6.43392746015763530355970484046e-1;
    static constexpr double b1 = 5.42937341165687622380535766363e-2;
    static constexpr double b6 = 4.45031289275240888144113950566e0;
    static constexpr double b7 = 1.89151789931450038304281599044e0;
    static constexpr double b8 = -5.8012039600105847814672114227e0;
    static constexpr double b9 = 3.1116436695781989440891606237e-1;
    static constexpr double b10 = -1.52160949662516078556178806805e-1;
    static constexpr double b11 = 2.01365400804030348374776537501e-1;
    static constexpr double b12 = 4.47106157277725905176885569043e-2;
    static constexpr double e31 = 0.244094488188976377952755905512e+00;
    static constexpr double e32 = 0.733846688281611857341361741547e+00;
    static constexpr double e33 = 0.220588235294117647058823529412e-01;
    static constexpr double e51 = 0.1312004499419488073250102996e-01;
    static constexpr double e56 = -0.1225156446376204440720569753e+01;
    static constexpr double e57 = -0.4957589496572501915214079952e+00;
    static constexpr double e58 = 0.1664377182454986536961530415e+01;
    static constexpr double e59 = -0.3503288487499736816886487290e+00;
    static constexpr double e510 = 0.3341791187130174790297318841e+00;
    static constexpr double e511 = 0.8192320648511571246570742613e-01;
    static constexpr double e512 = -0.2235530786388629525884427845e-01;

    VectorXd k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, ksum;
    bool have_k1 = false;

    double attempt(const OdeRhs& f, double t, const VectorXd& y, double h,
                   VectorXd& y1, double atol, double rtol) {
        if (!have_k1) {
            k1 = f(t, y);
            have_k1 = true;
        }
        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a53 * k3 + a54 * k4));
        k6 = f(t + c6 * h, y + h * (a61 * k1 + a64 * k4 + a65 * k5));
        k7 = f(t + c7 * h, y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6));
        k8 = f(t + c8 * h, y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7));
        k9 = f(t + c9 * h, y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8));
        k10 = f(t + c10 * h, y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7 +
                                      a108 * k8 + a109 * k9));
        k11 = f(t + c11 * h, y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 +
                                      a118 * k8 + a119 * k9 + a1110 * k10));
        k12 = f(t + h, y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 +
                                a128 * k8 + a129 * k9 + a1210 * k10 + a1211 * k11));
        ksum = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k11 + b12 * k12;
        y1 = y + h * ksum;
        double err3 = 0.0, err5 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y1(i)));
            const double e3i = ksum(i) - e31 * k1(i) - e32 * k9(i) - e33 * k12(i);
            const double e5i = e51 * k1(i) + e56 * k6(i) + e57 * k7(i) + e58 * k8(i) +
                               e59 * k9(i) + e510 * k10(i) + e511 * k11(i) + e512 * k12(i);
            err3 += (e3i / sc) * (e3i / sc);
            err5 += (e5i / sc) * (e5i / sc);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0)
            deno = 1.0;
        return std::abs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(y.size()) * deno));
    }

    void accept() { have_k1 = false; }
};

template <class Stepper>
std::vector<VectorXd> drive(const OdeRhs& f, double t0, const VectorXd& y0,
                            const std::vector<double>& targets, const OdeOptions& opts,
                            const StepLimiter& limiter) {
    std::vector<VectorXd> out;
    out.reserve(targets.size());
    if (targets.empty())
        return out;

    const double dir = targets.back() >= t0 ? 1.0 : -1.0;
    Stepper st;
    VectorXd y = y0, y1;
    double t = t0;
    double h = std::min(opts.max_step, 1e-2 * (1.0 + std::abs(t0)));
    const double safe = 0.9, facmin = 0.2, facmax = 6.0;
    const double exp_ = 1.0 / static_cast<double>(Stepper::order_exp);

    for (double target : targets) {
        while (dir * (target - t) > 0.0) {
            const double remaining = std::abs(target - t);
            const double snap =
                4.0 * machine_eps * std::max({std::abs(t), std::abs(target), 1.0});
            if (remaining <= snap) {  // target within roundoff of the current time
                t = target;
                break;
            }
            double hmax = opts.max_step;
            if (limiter)
                hmax = std::min(hmax, limiter(y));
            h = std::min(h, hmax);
            double hstep = std::min(h, remaining);
            if (hstep < snap)
                throw ToleranceFailure("step size underflow during integration");
            const double err = st.attempt(f, t, y, dir * hstep, y1, opts.abs_tol, opts.rel_tol);
            if (err <= 1.0) {
                t = (hstep >= remaining) ? target : t + dir * hstep;
                y.swap(y1);
                st.accept();
                if (y.lpNorm<Eigen::Infinity>() > opts.blowup_norm)
                    throw BlowUp("solution norm exceeded blow-up threshold");
                const double fac = err == 0.0 ? facmax
                                              : std::clamp(safe * std::pow(err, -exp_), facmin, facmax);
                h = std::min(hstep * fac, opts.max_step);
            } else {
                // k1 stays valid on rejection; (t, y) unchanged
                h = hstep * std::max(facmin, safe * std::pow(err, -exp_));
            }
        }
        out.push_back(y);
    }
    return out;
}

} // namespace

std::vector<VectorXd> integrate_to(const OdeRhs& f, double t0, const VectorXd& y0,
                                   const std::vector<double>& targets, const OdeOptions& opts,
                                   const StepLimiter& limiter) {
    for (size_t i = 1; i < targets.size(); ++i) {
        const bool fwd = targets.back() >= t0;
        if (fwd ? targets[i] < targets[i - 1] : targets[i] > targets[i - 1])
            throw ConfigError("integrate_to: targets must be monotone away from t0");
    }
    if (opts.method == RkMethod::Dop853)
        return drive<Dop853>(f, t0, y0, targets, opts, limiter);
    return drive<Dopri5>(f, t0, y0, targets, opts, limiter);
}

} // namespace bkm

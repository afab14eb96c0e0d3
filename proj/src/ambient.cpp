#include "syv/ambient.hpp"

#include <cmath>
#include <stdexcept>

namespace syv {

AmbientSpec AmbientSpec::euclidean(int dim)
{
    AmbientSpec a;
    a.kind = Kind::Euclidean;
    a.dim = dim;
    return a;
}

AmbientSpec AmbientSpec::space_form(int dim, double c)
{
    AmbientSpec a;
    a.kind = Kind::SpaceForm;
    a.dim = dim;
    a.c = c;
    return a;
}

AmbientSpec AmbientSpec::conformal(int dim, ExprAst omega)
{
    AmbientSpec a;
    a.kind = Kind::ConformalFlat;
    a.dim = dim;
    a.omega = std::make_shared<ExprAst>(std::move(omega));
    return a;
}

OmegaJet AmbientSpec::omega_jets(const AVec& x) const
{
    const int d = static_cast<int>(x.size());
    OmegaJet oj;
    oj.g = AVec::Zero(d);
    oj.H = AMat::Zero(d, d);

    if (euclidean_route() || spherical_chart())
        return oj;

    if (kind == Kind::SpaceForm) {
        // omega = log 2 - log(1 + c |x|^2), the constant-curvature ball chart.
        const double s = x.squaredNorm();
        const double q = 1.0 + c * s;
        if (q <= 0.0)
            throw std::domain_error("space-form chart point outside the model ball");
        oj.w = std::log(2.0 / q);
        oj.g = (-2.0 * c / q) * x;
        oj.H = (4.0 * c * c / (q * q)) * (x * x.transpose());
        oj.H -= (2.0 * c / q) * AMat::Identity(d, d);
        return oj;
    }

    // ConformalFlat: omega expression in chart coordinates.
    std::vector<double> pt(omega->variables().size(), 0.0);
    for (std::size_t vi = 0; vi < omega->variables().size(); ++vi)
        pt[vi] = x[static_cast<int>(vi)];
    const JetValue j = omega->eval_jet(pt);
    oj.w = j.v;
    const int nv = static_cast<int>(omega->variables().size());
    for (int a = 0; a < nv; ++a) {
        oj.g[a] = j.d[a];
        for (int b = 0; b < nv; ++b)
            oj.H(a, b) = j.d2(a, b);
    }
    return oj;
}

namespace {

// M(A,B) = Hess(omega)(A,B) - (g.A)(g.B)
inline double mform(const OmegaJet& oj, const AVec& A, const AVec& B)
{
    return A.dot(oj.H * B) - oj.g.dot(A) * oj.g.dot(B);
}

} // namespace

double conformal_rm(const OmegaJet& oj, const AVec& X, const AVec& Y,
                    const AVec& Z, const AVec& W)
{
    const double xw = X.dot(W), xz = X.dot(Z), zy = Z.dot(Y), wy = W.dot(Y);
    const double g2 = oj.g.squaredNorm();
    const double val = xw * mform(oj, Y, Z) - xz * mform(oj, Y, W)
                     + zy * mform(oj, X, W) - wy * mform(oj, X, Z)
                     + (xw * zy - xz * wy) * g2;
    return std::exp(2.0 * oj.w) * val;
}

double conformal_scalar(const OmegaJet& oj, int m)
{
    const double lap = oj.H.trace();
    const double g2 = oj.g.squaredNorm();
    return std::exp(-2.0 * oj.w) * (-2.0 * (m - 1) * lap - (m - 1) * (m - 2) * g2);
}

double conformal_ricci(const OmegaJet& oj, int m, const AVec& A, const AVec& B)
{
    const double lap = oj.H.trace();
    const double g2 = oj.g.squaredNorm();
    return (2 - m) * mform(oj, A, B) - A.dot(B) * (lap + (m - 2) * g2);
}

double conformal_schouten(const OmegaJet& oj, int m, const AVec& A, const AVec& B)
{
    if (m < 3)
        throw std::invalid_argument("Schouten tensor needs ambient dimension >= 3");
    const double ric = conformal_ricci(oj, m, A, B);
    const double scal = conformal_scalar(oj, m);
    const double ghat = std::exp(2.0 * oj.w) * A.dot(B);
    return (ric - scal * ghat / (2.0 * (m - 1))) / (m - 2);
}

} // namespace syv

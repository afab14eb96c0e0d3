#pragma once

#include "syv/expr.hpp"

#include <Eigen/Dense>
#include <memory>

namespace syv {

// Small fixed-capacity vectors/matrices: ambient charts have dimension <= 4
// (spherical space forms are carried in the embedding chart of R^{n+2});
// surface matrices reach 10x10 in the homogeneous high-dimension mode.
using AVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using AMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 10, 1>;
using SMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 10, 10>;

// Conformal factor data at a point: omega, gradient, Hessian (chart coords).
struct OmegaJet {
    double w = 0.0;
    AVec g;
    AMat H;
};

// Model Riemannian background. Three kinds:
//  - Euclidean R^{n+1};
//  - SpaceForm of sectional curvature c: for c > 0 the round sphere carried
//    in its embedding chart (R^{n+2} restricted to |X| = 1/sqrt(c)), for
//    c < 0 the ball with metric 4|dx|^2/(1+c|x|^2)^2, for c = 0 the
//    Euclidean code route;
//  - ConformalFlat e^{2 omega} delta with omega an expression in the chart
//    coordinates (x[, y[, z]]).
struct AmbientSpec {
    enum class Kind { Euclidean, SpaceForm, ConformalFlat };

    Kind kind = Kind::Euclidean;
    int dim = 3;     // manifold dimension n+1
    double c = 0.0;  // SpaceForm curvature
    std::shared_ptr<const ExprAst> omega;

    static AmbientSpec euclidean(int dim);
    static AmbientSpec space_form(int dim, double c);
    static AmbientSpec conformal(int dim, ExprAst omega);

    // SpaceForm with c = 0 must run the Euclidean code path.
    bool euclidean_route() const
    {
        return kind == Kind::Euclidean || (kind == Kind::SpaceForm && c == 0.0);
    }
    bool spherical_chart() const { return kind == Kind::SpaceForm && c > 0.0; }
    bool conformal_route() const
    {
        return kind == Kind::ConformalFlat || (kind == Kind::SpaceForm && c < 0.0);
    }

    // Chart dimension: dim+1 for the spherical embedding chart, else dim.
    int chart_dim() const { return spherical_chart() ? dim + 1 : dim; }

    // Conformal factor jets at a chart point (conformal route only; the
    // Euclidean route returns the zero jet).
    OmegaJet omega_jets(const AVec& x) const;
};

// Curvature of e^{2 omega} delta, index pattern fixed so that a space form of
// curvature c gives Rm(X,Y,Z,W) = c (g(X,Z) g(Y,W) - g(X,W) g(Y,Z)).
double conformal_rm(const OmegaJet& oj, const AVec& X, const AVec& Y,
                    const AVec& Z, const AVec& W);

// Scalar curvature of e^{2 omega} delta in manifold dimension m.
double conformal_scalar(const OmegaJet& oj, int m);

// Ricci of e^{2 omega} delta evaluated on two chart vectors.
double conformal_ricci(const OmegaJet& oj, int m, const AVec& A, const AVec& B);

// Schouten tensor P = (Ric - R g / (2(m-1))) / (m-2) on two chart vectors.
double conformal_schouten(const OmegaJet& oj, int m, const AVec& A, const AVec& B);

} // namespace syv

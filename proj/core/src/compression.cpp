#include "qcorr/compression.hpp"

#include <cmath>
#include <string>

namespace qcorr {

std::pair<Matrix, Matrix> choose_subspaces(const TensorModel& m, int rank_a, int rank_b,
                                           Tolerance tol) {
    if (rank_a < 1 || rank_a > m.dim_a || rank_b < 1 || rank_b > m.dim_b)
        throw DimensionError("choose_subspaces: target ranks must satisfy 1 <= a <= dim_a, 1 <= b <= dim_b");

    auto dominant = [&](const Matrix& reduced, int rank) {
        Eig e = hermitian_eig(reduced, tol);
        const int n = static_cast<int>(reduced.rows());
        Matrix p = Matrix::Zero(n, n);
        for (int k = 0; k < rank; ++k) { // eigenvalues ascend; take from the top
            Vector v = e.vectors.col(n - 1 - k);
            p += v * v.adjoint();
        }
        return p;
    };

    Matrix p = dominant(partial_trace(m.state, m.dim_a, m.dim_b, Side::B), rank_a);
    Matrix q = dominant(partial_trace(m.state, m.dim_a, m.dim_b, Side::A), rank_b);

    const double weight = (m.state * kron(p, q)).trace().real();
    if (weight <= tol.rank_tol)
        throw ValidationError("choose_subspaces: state weight " + std::to_string(weight) +
                              " vanishes on the chosen subspace");
    return {std::move(p), std::move(q)};
}

CompressionResult compress(const TensorModel& m, const Matrix& p, const Matrix& q, Tolerance tol) {
    if (p.rows() != m.dim_a || p.cols() != m.dim_a || q.rows() != m.dim_b || q.cols() != m.dim_b)
        throw DimensionError("compress: projection shapes do not match the model dims");

    const double weight = (m.state * kron(p, q)).trace().real();
    if (weight <= tol.rank_tol)
        throw ValidationError("compress: state weight " + std::to_string(weight) +
                              " vanishes on the chosen subspace");

    const Matrix wp = range_isometry(p, tol);
    const Matrix wq = range_isometry(q, tol);
    const Matrix wpq = kron(wp, wq);

    CompressionResult out;
    out.state_weight = weight;
    out.compressed.dim_a = static_cast<int>(wp.cols());
    out.compressed.dim_b = static_cast<int>(wq.cols());
    out.compressed.layout = m.layout;
    out.compressed.alice_povms.resize(m.alice_povms.size());
    for (std::size_t i = 0; i < m.alice_povms.size(); ++i)
        for (const auto& x : m.alice_povms[i])
            out.compressed.alice_povms[i].push_back(wp.adjoint() * x * wp);
    out.compressed.bob_povms.resize(m.bob_povms.size());
    for (std::size_t j = 0; j < m.bob_povms.size(); ++j)
        for (const auto& y : m.bob_povms[j])
            out.compressed.bob_povms[j].push_back(wq.adjoint() * y * wq);

    Matrix rho = wpq.adjoint() * m.state * wpq / weight;
    out.compressed.state = 0.5 * (rho + rho.adjoint());

    CorrelationTable before = correlations_tensor(m, tol);
    CorrelationTable after = correlations_tensor(out.compressed, tol);
    out.error = max_table_deviation(before, after);
    return out;
}

} // namespace qcorr

#include "qcorr/random.hpp"

#include <Eigen/QR>

#include <cmath>

namespace qcorr {

Matrix random_ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return g;
}

Matrix random_hermitian(int n, Rng& rng) {
    Matrix g = random_ginibre(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(int n, Rng& rng) {
    Matrix g = random_ginibre(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

Matrix random_density(int n, Rng& rng) {
    Matrix g = random_ginibre(n, n, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

std::vector<Matrix> random_povm(int n, int outcomes, Rng& rng) {
    Eig e = hermitian_eig(random_hermitian(n, rng));
    std::vector<Matrix> povm(outcomes, Matrix::Zero(n, n));
    for (int k = 0; k < n; ++k) {
        Vector v = e.vectors.col(k);
        povm[k % outcomes] += v * v.adjoint();
    }
    return povm;
}

} // namespace qcorr

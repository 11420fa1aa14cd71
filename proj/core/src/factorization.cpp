#include "qcorr/factorization.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qcorr/random.hpp"

namespace qcorr {

namespace {

Matrix generic_hermitian(const std::vector<Matrix>& basis, int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix h = Matrix::Zero(n, n);
    for (const auto& b : basis) h += Complex(gauss(rng), gauss(rng)) * b;
    return 0.5 * (h + h.adjoint());
}

AlgebraBasis compress_algebra(const AlgebraBasis& ambient, const Matrix& isometry, Tolerance tol) {
    std::vector<Matrix> compressed;
    compressed.reserve(ambient.basis.size());
    for (const auto& b : ambient.basis) compressed.push_back(isometry.adjoint() * b * isometry);
    const int r = static_cast<int>(isometry.cols());
    return AlgebraBasis{r, hs_orthonormalize(compressed, {}, tol), true};
}

} // namespace

BlockFactorization factor_block(const AlgebraBasis& ambient, const Matrix& block_projection,
                                std::uint64_t seed, Tolerance tol) {
    const Matrix w = range_isometry(block_projection, tol);
    const int r = static_cast<int>(w.cols());
    AlgebraBasis block = compress_algebra(ambient, w, tol);

    // the compressed algebra must be a factor
    AlgebraBasis z = center(block, tol);
    if (z.dim() != 1)
        throw ValidationError("factor_block: block algebra has center of dimension " +
                              std::to_string(z.dim()) + ", not a factor");

    const int d2 = block.dim();
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2 || r % d != 0)
        throw DegeneracyError("factor_block: block algebra dimension " + std::to_string(d2) +
                              " on rank " + std::to_string(r) + " is not of factor shape");
    const int m = r / d;

    AlgebraBasis block_commutant = commutant(block, tol);

    Rng rng(seed);
    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt < 8; ++attempt) {
        // spectral clusters of a generic element: d of them, multiplicity m each
        Matrix h = generic_hermitian(block.basis, r, rng);
        Eig eh = hermitian_eig(h, Tolerance(tol.rank_tol, 1e-6));
        auto clusters = cluster_eigenvalues(eh.values);
        if (static_cast<int>(clusters.size()) != d) {
            last_failure = "generic element produced " + std::to_string(clusters.size()) +
                           " clusters, expected " + std::to_string(d);
            continue;
        }
        bool sizes_ok = true;
        std::string sizes;
        for (const auto& [begin, end] : clusters) {
            sizes += (sizes.empty() ? "" : ",") + std::to_string(end - begin);
            if (end - begin != m) sizes_ok = false;
        }
        if (!sizes_ok) {
            last_failure = "cluster multiplicities (" + sizes + ") are unequal, expected " +
                           std::to_string(m);
            continue;
        }

        std::vector<Matrix> q(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            q[static_cast<std::size_t>(i)] = Matrix::Zero(r, r);
            for (int k = clusters[static_cast<std::size_t>(i)].first;
                 k < clusters[static_cast<std::size_t>(i)].second; ++k) {
                Vector v = eh.vectors.col(k);
                q[static_cast<std::size_t>(i)] += v * v.adjoint();
            }
        }

        // partial isometries joining the clusters through a generic element
        Matrix b = generic_hermitian(block.basis, r, rng);
        std::vector<Matrix> e(static_cast<std::size_t>(d));
        bool ranks_ok = true;
        for (int i = 0; i < d; ++i) {
            Matrix raw = q[static_cast<std::size_t>(i)] * b * q[0];
            Matrix iso = polar_partial_isometry(raw, tol);
            const double rank = (iso.adjoint() * iso).trace().real();
            if (std::abs(rank - m) > 0.1) {
                last_failure = "partial isometry " + std::to_string(i) + " has rank " +
                               std::to_string(rank) + ", expected " + std::to_string(m);
                ranks_ok = false;
                break;
            }
            e[static_cast<std::size_t>(i)] = std::move(iso);
        }
        if (!ranks_ok) continue;

        // multiplicity basis: eigenbasis of a generic commutant element
        // compressed to the first cluster
        Matrix w1 = range_isometry(q[0], tol);
        Matrix g = generic_hermitian(block_commutant.basis, r, rng);
        Eig eg = hermitian_eig(w1.adjoint() * g * w1, Tolerance(tol.rank_tol, 1e-6));
        Matrix xi = w1 * eg.vectors; // r x m, orthonormal columns in range(q_1)

        Matrix u = Matrix::Zero(r, r);
        for (int i = 0; i < d; ++i)
            for (int s = 0; s < m; ++s)
                u.row(i * m + s) = (e[static_cast<std::size_t>(i)] * xi.col(s)).adjoint();

        BlockFactorization out;
        out.d = d;
        out.m = m;
        out.block_isometry = w;
        out.unitary = u;
        out.unitarity_residual = (u.adjoint() * u - Matrix::Identity(r, r)).norm();
        if (out.unitarity_residual > tol.residual_tol) {
            last_failure = "assembled map is not unitary, residual " +
                           std::to_string(out.unitarity_residual);
            continue;
        }

        // mapped algebra elements must act on the first factor only,
        // mapped commutant elements on the second
        const Matrix id_m = Matrix::Identity(m, m);
        const Matrix id_d = Matrix::Identity(d, d);
        double alice_res = 0.0;
        for (const auto& a : block.basis) {
            Matrix c = u * a * u.adjoint();
            Matrix x = partial_trace(c, d, m, Side::B) / static_cast<double>(m);
            alice_res = std::max(alice_res, (c - kron(x, id_m)).norm());
        }
        double bob_res = 0.0;
        for (const auto& a : block_commutant.basis) {
            Matrix c = u * a * u.adjoint();
            Matrix y = partial_trace(c, d, m, Side::A) / static_cast<double>(d);
            bob_res = std::max(bob_res, (c - kron(id_d, y)).norm());
        }
        out.alice_tensor_residual = alice_res;
        out.bob_tensor_residual = bob_res;
        if (std::max(alice_res, bob_res) > tol.residual_tol) {
            last_failure = "mapped generators have off-tensor residual " +
                           std::to_string(std::max(alice_res, bob_res));
            continue;
        }
        return out;
    }
    throw DegeneracyError("factor_block: 8 generic draws failed (" + last_failure + ")");
}

TensorRealization doubling_the_center(const CommutingModel& m, std::uint64_t seed, Tolerance tol) {
    try {
        require_valid(m, tol);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("doubling_the_center: validation stage: ") + e.what());
    }

    std::vector<Matrix> generators;
    for (const auto& setting : m.alice_povms)
        for (const auto& x : setting) generators.push_back(x);

    AlgebraBasis algebra = generate_star_algebra(generators, m.dim, tol);
    AlgebraBasis z = center(algebra, tol);
    CentralDecomposition decomp = minimal_central_projections(z, seed, tol);
    const int nblocks = static_cast<int>(decomp.projections.size());

    Rng master(seed);
    TensorRealization out;
    out.blocks.reserve(static_cast<std::size_t>(nblocks));
    for (int k = 0; k < nblocks; ++k) {
        BlockFactorization bf;
        try {
            bf = factor_block(algebra, decomp.projections[static_cast<std::size_t>(k)], master(), tol);
        } catch (const Error& e) {
            throw DegeneracyError("doubling_the_center: block " + std::to_string(k) + ": " +
                                  e.what());
        }
        bf.block_index = k;
        out.blocks.push_back(std::move(bf));
    }

    out.dim_a = 0;
    out.dim_b = 0;
    std::vector<int> off_a, off_b;
    for (const auto& b : out.blocks) {
        off_a.push_back(out.dim_a);
        off_b.push_back(out.dim_b);
        out.dim_a += b.d;
        out.dim_b += b.m;
    }

    // mapped POVMs, block by block
    auto map_family = [&](const std::vector<std::vector<Matrix>>& povms, bool alice_side) {
        std::vector<std::vector<Matrix>> mapped(povms.size());
        const int dim = alice_side ? out.dim_a : out.dim_b;
        for (std::size_t i = 0; i < povms.size(); ++i)
            for (const auto& op : povms[i]) {
                Matrix big = Matrix::Zero(dim, dim);
                for (int k = 0; k < nblocks; ++k) {
                    const auto& bf = out.blocks[static_cast<std::size_t>(k)];
                    Matrix c = bf.unitary * (bf.block_isometry.adjoint() * op * bf.block_isometry) *
                               bf.unitary.adjoint();
                    if (alice_side) {
                        Matrix x = partial_trace(c, bf.d, bf.m, Side::B) / static_cast<double>(bf.m);
                        const double res = (c - kron(x, Matrix::Identity(bf.m, bf.m))).norm();
                        if (res > tol.residual_tol)
                            throw DegeneracyError(
                                "doubling_the_center: block " + std::to_string(k) +
                                ": Alice operator is not of the form x (x) 1, residual " +
                                std::to_string(res));
                        big.block(off_a[static_cast<std::size_t>(k)], off_a[static_cast<std::size_t>(k)],
                                  bf.d, bf.d) = x;
                    } else {
                        Matrix y = partial_trace(c, bf.d, bf.m, Side::A) / static_cast<double>(bf.d);
                        const double res = (c - kron(Matrix::Identity(bf.d, bf.d), y)).norm();
                        if (res > tol.residual_tol)
                            throw DegeneracyError(
                                "doubling_the_center: block " + std::to_string(k) +
                                ": Bob operator is not of the form 1 (x) y, residual " +
                                std::to_string(res));
                        big.block(off_b[static_cast<std::size_t>(k)], off_b[static_cast<std::size_t>(k)],
                                  bf.m, bf.m) = y;
                    }
                }
                mapped[i].push_back(std::move(big));
            }
        return mapped;
    };

    TensorModel tm;
    tm.dim_a = out.dim_a;
    tm.dim_b = out.dim_b;
    tm.layout = m.layout;
    tm.alice_povms = map_family(m.alice_povms, true);
    tm.bob_povms = map_family(m.bob_povms, false);

    // V sends block k of the original space into the (k,k) diagonal
    // sub-block of the assembled tensor space
    Matrix v = Matrix::Zero(static_cast<Eigen::Index>(out.dim_a) * out.dim_b, m.dim);
    for (int k = 0; k < nblocks; ++k) {
        const auto& bf = out.blocks[static_cast<std::size_t>(k)];
        Matrix local = bf.unitary * bf.block_isometry.adjoint(); // (d*m) x dim
        for (int i = 0; i < bf.d; ++i)
            for (int s = 0; s < bf.m; ++s)
                v.row(static_cast<Eigen::Index>(off_a[static_cast<std::size_t>(k)] + i) * out.dim_b +
                      (off_b[static_cast<std::size_t>(k)] + s)) = local.row(i * bf.m + s);
    }
    out.isometry = v;
    const double vres = (v.adjoint() * v - Matrix::Identity(m.dim, m.dim)).norm();
    if (vres > tol.residual_tol)
        throw DegeneracyError("doubling_the_center: assembled map is not an isometry, residual " +
                              std::to_string(vres));

    tm.state = v * m.state * v.adjoint();
    out.tensor_model = std::move(tm);

    try {
        require_valid(out.tensor_model, tol);
    } catch (const ValidationError& e) {
        throw DegeneracyError(std::string("doubling_the_center: mapped model stage: ") + e.what());
    }

    out.max_deviation = verify_realization(m, out, tol);
    if (out.max_deviation > tol.residual_tol)
        throw DegeneracyError("doubling_the_center: correlation deviation " +
                              std::to_string(out.max_deviation) + " exceeds the budget");
    return out;
}

double verify_realization(const CommutingModel& m, const TensorRealization& r, Tolerance) {
    if (!(m.layout == r.tensor_model.layout))
        throw DimensionError("verify_realization: layouts differ");
    // no validation here: deviations of defective realizations are part of
    // the contract
    double dev = 0.0;
    for (int i = 0; i < m.layout.alice_settings(); ++i)
        for (int a = 0; a < m.layout.alice[i]; ++a)
            for (int j = 0; j < m.layout.bob_settings(); ++j)
                for (int b = 0; b < m.layout.bob[j]; ++b) {
                    const double p =
                        (m.state * m.alice_povms[i][a] * m.bob_povms[j][b]).trace().real();
                    const double pt = (r.tensor_model.state *
                                       kron(r.tensor_model.alice_povms[i][a],
                                            r.tensor_model.bob_povms[j][b]))
                                          .trace()
                                          .real();
                    dev = std::max(dev, std::abs(p - pt));
                }
    return dev;
}

} // namespace qcorr

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcorr/matrix.hpp"

namespace qcorr {

// All randomness in the library flows through an explicitly seeded engine,
// so every "generic element" choice is reproducible.
using Rng = std::mt19937_64;

// iid standard complex normal entries
Matrix random_ginibre(int rows, int cols, Rng& rng);

Matrix random_hermitian(int n, Rng& rng);

// Haar distributed, via QR of a Ginibre matrix with the phase fix
Matrix random_unitary(int n, Rng& rng);

// GG'/tr(GG')
Matrix random_density(int n, Rng& rng);

// Projective POVM: eigenvectors of a random Hermitian grouped into
// outcome bins round-robin.
std::vector<Matrix> random_povm(int n, int outcomes, Rng& rng);

} // namespace qcorr

#include "raddiff/state.hpp"

#include <cmath>

#include "raddiff/error.hpp"

namespace raddiff {

StateField::StateField(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
    const std::size_t nc = static_cast<std::size_t>(grid_->dim()) + 3;
    values_.assign(nc, RealArray(grid_->size(), 0.0));
    coeffs_.assign(nc, SpectralArray(grid_->size()));
}

StateField StateField::from_coeffs(std::shared_ptr<const Grid> grid, std::vector<SpectralArray> coeffs) {
    StateField s(std::move(grid));
    if (coeffs.size() != s.n_components()) throw DomainError("state: wrong number of components");
    for (std::size_t c = 0; c < coeffs.size(); ++c) s.set_coeffs(c, std::move(coeffs[c]));
    return s;
}

std::span<double> StateField::values_mut(std::size_t comp) {
    spectral_valid_ = false;
    return values_.at(comp);
}

std::span<const cplx> StateField::coeffs(std::size_t comp) const {
    if (!spectral_valid_) throw NumericalFailure("state: spectral cache is stale; call refresh_spectral()");
    return coeffs_.at(comp);
}

void StateField::set_coeffs(std::size_t comp, SpectralArray c) {
    if (c.size() != grid_->size()) throw DomainError("state: coefficient array size mismatch");
    if (!spectral_valid_) refresh_spectral();
    values_.at(comp) = grid_->inverse(c);
    coeffs_.at(comp) = std::move(c);
}

void StateField::refresh_spectral() {
    for (std::size_t c = 0; c < values_.size(); ++c) coeffs_[c] = grid_->forward(values_[c]);
    spectral_valid_ = true;
}

void StateField::remove_mean() {
    if (!spectral_valid_) refresh_spectral();
    for (std::size_t c = 0; c < values_.size(); ++c) {
        const double mean = coeffs_[c][0].real();
        coeffs_[c][0] = cplx{};
        for (auto& v : values_[c]) v -= mean;
    }
}

double StateField::max_abs_mean() const {
    double m = 0.0;
    for (std::size_t c = 0; c < coeffs_.size(); ++c) m = std::max(m, std::abs(coeffs(c)[0]));
    return m;
}

std::vector<std::string> StateField::component_names() const {
    static const char* axes[] = {"u_x", "u_y", "u_z"};
    std::vector<std::string> names{"rho"};
    for (int d = 0; d < dim(); ++d) names.emplace_back(axes[d]);
    names.emplace_back("theta");
    names.emplace_back("j0");
    return names;
}

}  // namespace raddiff

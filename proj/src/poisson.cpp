#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "hopflink/current.hpp"
#include "hopflink/geometry.hpp"

namespace hopflink {

namespace {

// Mean of 1/|r| over the unit cube centered at the origin; used for the
// self-cell value of the discretized Green function.
double unit_cube_inv_r_mean() {
  static const double value = [] {
    const int n = 64;  // midpoint rule, even count keeps samples off r = 0
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double x = (i + 0.5) / n - 0.5;
          const double y = (j + 0.5) / n - 0.5;
          const double z = (k + 0.5) / n - 0.5;
          sum += 1.0 / std::sqrt(x * x + y * y + z * z);
        }
    return sum / (double(n) * n * n);
  }();
  return value;
}

struct PaddedFFT {
  int m[3];           // padded sizes (z, y, x order for FFTW row-major)
  std::size_t nreal;  // m0*m1*m2
  std::size_t ncplx;  // m0*m1*(m2/2+1)

  std::vector<double> real;
  std::vector<std::complex<double>> cplx;
  fftw_plan fwd = nullptr, bwd = nullptr;

  PaddedFFT(int mx, int my, int mz) {
    m[0] = mz;
    m[1] = my;
    m[2] = mx;
    nreal = std::size_t(m[0]) * m[1] * m[2];
    ncplx = std::size_t(m[0]) * m[1] * (m[2] / 2 + 1);
    real.assign(nreal, 0.0);
    cplx.resize(ncplx);
    fwd = fftw_plan_dft_r2c_3d(m[0], m[1], m[2], real.data(),
                               reinterpret_cast<fftw_complex*>(cplx.data()), FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_3d(m[0], m[1], m[2],
                               reinterpret_cast<fftw_complex*>(cplx.data()), real.data(), FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("FFTW plan creation failed");
  }
  ~PaddedFFT() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
  PaddedFFT(const PaddedFFT&) = delete;
  PaddedFFT& operator=(const PaddedFFT&) = delete;

  std::size_t ridx(int ix, int iy, int iz) const {
    return std::size_t(ix) + std::size_t(m[2]) * (std::size_t(iy) + std::size_t(m[1]) * iz);
  }
};

}  // namespace

Lattice<3> free_space_poisson(const Lattice<3>& rhs) {
  const GridSpec& g = rhs.grid;
  const int nx = g.nodes[0], ny = g.nodes[1], nz = g.nodes[2];
  const int mx = 2 * nx, my = 2 * ny, mz = 2 * nz;
  const double hx = g.spacing(0), hy = g.spacing(1), hz = g.spacing(2);
  const double cell = hx * hy * hz;

  PaddedFFT fft(mx, my, mz);

  // Spectrum of the free-space kernel 1/(4 pi r) sampled with min-image
  // distances on the padded (aliasing-free) grid.
  std::vector<std::complex<double>> ghat(fft.ncplx);
  {
    const double g0 = unit_cube_inv_r_mean() / std::cbrt(hx * hy * hz);
    for (int iz = 0; iz < mz; ++iz)
      for (int iy = 0; iy < my; ++iy)
        for (int ix = 0; ix < mx; ++ix) {
          const double dx = hx * std::min(ix, mx - ix);
          const double dy = hy * std::min(iy, my - iy);
          const double dz = hz * std::min(iz, mz - iz);
          const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
          fft.real[fft.ridx(ix, iy, iz)] =
              (r > 0.0 ? 1.0 / r : g0) / (4.0 * M_PI);
        }
    fftw_execute(fft.fwd);
    std::memcpy(ghat.data(), fft.cplx.data(), fft.ncplx * sizeof(std::complex<double>));
  }

  Lattice<3> out(g);
  const double norm = cell / (double(mx) * my * mz);
  for (int comp = 0; comp < 3; ++comp) {
    std::fill(fft.real.begin(), fft.real.end(), 0.0);
    for (int iz = 0; iz < nz; ++iz)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
          fft.real[fft.ridx(ix, iy, iz)] = rhs.at(ix, iy, iz)[comp];
    fftw_execute(fft.fwd);
    for (std::size_t i = 0; i < fft.ncplx; ++i) fft.cplx[i] *= ghat[i];
    fftw_execute(fft.bwd);
    for (int iz = 0; iz < nz; ++iz)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
          out.at(ix, iy, iz)[comp] = norm * fft.real[fft.ridx(ix, iy, iz)];
  }
  return out;
}

}  // namespace hopflink

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace hfsys::detail
{
namespace
{
std::mutex & planner_mutex()
{
	static std::mutex m;
	return m;
}
}  // namespace

template <class T>
FftBuffer<T>::FftBuffer(std::size_t count) : ptr_{nullptr}, count_{count}
{
	ptr_ = static_cast<T *>(fftw_malloc(sizeof(T) * (count ? count : 1)));
	if (!ptr_)
		throw std::bad_alloc{};
}

template <class T>
FftBuffer<T>::~FftBuffer()
{
	fftw_free(ptr_);
}

template class FftBuffer<double>;
template class FftBuffer<cplx>;

CubeFft::CubeFft(int n) : n_{n}
{
	FftBuffer<double> r(real_size());
	FftBuffer<cplx> c(spectrum_size());
	auto * cc = reinterpret_cast<fftw_complex *>(c.data());
	fwd_ = fftw_plan_dft_r2c_3d(n, n, n, r.data(), cc, FFTW_ESTIMATE);
	bwd_ = fftw_plan_dft_c2r_3d(n, n, n, cc, r.data(), FFTW_ESTIMATE);
}

CubeFft const & CubeFft::get(int n)
{
	static std::map<int, std::unique_ptr<CubeFft>> cache;
	std::lock_guard lock{planner_mutex()};
	auto & slot = cache[n];
	if (!slot)
		slot.reset(new CubeFft(n));
	return *slot;
}

std::size_t CubeFft::real_size() const
{
	return std::size_t(n_) * n_ * n_;
}

std::size_t CubeFft::spectrum_size() const
{
	return std::size_t(n_) * n_ * (n_ / 2 + 1);
}

void CubeFft::forward(double * in, cplx * out) const
{
	fftw_execute_dft_r2c(
		static_cast<fftw_plan>(fwd_), in, reinterpret_cast<fftw_complex *>(out));
}

void CubeFft::backward(cplx * in, double * out) const
{
	fftw_execute_dft_c2r(
		static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex *>(in), out);
}

SineFft::SineFft(int m) : m_{m}
{
	FftBuffer<double> a(m), b(m);
	fwd_ = fftw_plan_r2r_1d(m, a.data(), b.data(), FFTW_RODFT10, FFTW_ESTIMATE);
	bwd_ = fftw_plan_r2r_1d(m, a.data(), b.data(), FFTW_RODFT01, FFTW_ESTIMATE);
}

SineFft const & SineFft::get(int m)
{
	static std::map<int, std::unique_ptr<SineFft>> cache;
	std::lock_guard lock{planner_mutex()};
	auto & slot = cache[m];
	if (!slot)
		slot.reset(new SineFft(m));
	return *slot;
}

void SineFft::forward(double * in, double * out) const
{
	fftw_execute_r2r(static_cast<fftw_plan>(fwd_), in, out);
}

void SineFft::backward(double * in, double * out) const
{
	fftw_execute_r2r(static_cast<fftw_plan>(bwd_), in, out);
}
}  // namespace hfsys::detail

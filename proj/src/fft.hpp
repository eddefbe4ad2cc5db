#pragma once

// Thin FFTW wrapper: cached plans, aligned scratch buffers.

#include <complex>
#include <cstddef>

namespace hfsys::detail
{
using cplx = std::complex<double>;

template <class T>
class FftBuffer
{
public:
	explicit FftBuffer(std::size_t count);
	~FftBuffer();
	FftBuffer(FftBuffer const &) = delete;
	FftBuffer & operator=(FftBuffer const &) = delete;

	T * data() { return ptr_; }
	T const * data() const { return ptr_; }
	std::size_t size() const { return count_; }
	T & operator[](std::size_t i) { return ptr_[i]; }
	T const & operator[](std::size_t i) const { return ptr_[i]; }

private:
	T * ptr_;
	std::size_t count_;
};

// Real-to-complex transform on an n x n x n cube (row-major, last axis fastest).
// Spectrum shape n x n x (n/2+1). Backward is unnormalized.
class CubeFft
{
public:
	static CubeFft const & get(int n);

	int n() const { return n_; }
	std::size_t real_size() const;
	std::size_t spectrum_size() const;

	// `in` and `out` must come from FftBuffer.
	void forward(double * in, cplx * out) const;
	// Destroys `in`.
	void backward(cplx * in, double * out) const;

private:
	explicit CubeFft(int n);
	int n_;
	void * fwd_;
	void * bwd_;
};

// Sine transforms on the midpoint grid r_j = (j+1/2) dr, j = 0..m-1 (DST-II / DST-III).
// backward(forward(y)) = 2m * y.
class SineFft
{
public:
	static SineFft const & get(int m);

	int m() const { return m_; }
	void forward(double * in, double * out) const;
	void backward(double * in, double * out) const;

private:
	explicit SineFft(int m);
	int m_;
	void * fwd_;
	void * bwd_;
};
}  // namespace hfsys::detail

"""Independent reference computations: explicit loops and brute-force scans."""
import numpy as np


def energy_loop(image, phi, bias, c1, c2, lam1, lam2, mu, nu):
    h, w = image.shape
    data1 = data2 = reg = pen = 0.0
    for y in range(h):
        for x in range(w):
            p = phi[y][x]
            data1 += (image[y][x] - bias[y][x] * c1) ** 2 * (1 + p) ** 2
            data2 += (image[y][x] - bias[y][x] * c2) ** 2 * (1 - p) ** 2
            reg += (phi[y][(x + 1) % w] - p) ** 2 + (phi[(y + 1) % h][x] - p) ** 2
            pen += (p * p - 1) ** 2
    return lam1 * data1, lam2 * data2, mu * reg, nu * pen


def scan_constant(image, phi, bias, sign, lo=0.0, hi=2.0, step=1e-4):
    """Grid-search the region constant minimizing its data term."""
    grid = np.arange(lo, hi + step / 2, step)
    weight = ((1 + sign * phi) ** 2).ravel()
    resid = image.ravel()[None, :] - grid[:, None] * bias.ravel()[None, :]
    cost = (resid ** 2 * weight[None, :]).sum(axis=1)
    return grid[np.argmin(cost)]


def scan_bias(image, phi, c1, c2, lam1, lam2, lo=0.0, hi=3.0, step=1e-4):
    """Per-pixel grid search of the pointwise data integrand over b."""
    grid = np.arange(lo, hi + step / 2, step)
    out = np.empty_like(image)
    for idx in np.ndindex(image.shape):
        i, p = image[idx], phi[idx]
        cost = lam1 * (i - grid * c1) ** 2 * (1 + p) ** 2 + lam2 * (i - grid * c2) ** 2 * (1 - p) ** 2
        out[idx] = grid[np.argmin(cost)]
    return out


def periodic_laplacian_matrix(h, w):
    n = h * w
    L = np.zeros((n, n))
    for y in range(h):
        for x in range(w):
            k = y * w + x
            L[k, k] = -4.0
            for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                L[k, ((y + dy) % h) * w + (x + dx) % w] += 1.0
    return L


def dense_diffuse(phi, mu_tau):
    h, w = phi.shape
    A = np.eye(h * w) - mu_tau * periodic_laplacian_matrix(h, w)
    return np.linalg.solve(A, phi.ravel()).reshape(h, w)


def coefficients_loop(image, bias, c1, c2, lam1, lam2):
    A = np.empty_like(image)
    B = np.empty_like(image)
    for idx in np.ndindex(image.shape):
        A[idx] = lam1 * (image[idx] - bias[idx] * c1) ** 2
        B[idx] = lam2 * (image[idx] - bias[idx] * c2) ** 2
    return A, B


def random_instance(rng, shape, binary=True):
    image = rng.random(shape)
    bias = rng.uniform(0.5, 1.5, shape)
    if binary:
        phi = np.where(rng.random(shape) < 0.5, 1.0, -1.0)
        phi.flat[0], phi.flat[1] = 1.0, -1.0  # both regions non-empty
    else:
        phi = rng.uniform(-1.5, 1.5, shape)
    return image, phi, bias

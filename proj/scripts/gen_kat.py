#!/usr/bin/env python3
"""Generate ML-KEM known-answer vector files (.rsp) for the test suite.

The vectors are produced by a self-contained FIPS 203 implementation kept in
this script, which is cross-validated at generation time against the ML-KEM
implementation shipped with the `cryptography` package (OpenSSL backend) for
the 768 and 1024 parameter sets:

  * key generation from a fixed (d, z) seed must produce byte-identical
    encapsulation keys,
  * ciphertexts produced by OpenSSL encapsulation must decapsulate to the
    same shared secret here, and vice versa.

ML-KEM-512 is not exposed by that backend, so its vectors rely on this
implementation alone (the C++ suite independently re-validates them).

Usage: python3 scripts/gen_kat.py <output-dir>
"""

import hashlib
import sys
from pathlib import Path

Q = 3329
N = 256

PARAMS = {
    512: dict(k=2, eta1=3, eta2=2, du=10, dv=4),
    768: dict(k=3, eta1=2, eta2=2, du=10, dv=4),
    1024: dict(k=4, eta1=2, eta2=2, du=11, dv=5),
}


def sha3_256(b):
    return hashlib.sha3_256(b).digest()


def sha3_512(b):
    return hashlib.sha3_512(b).digest()


def shake128(b, n):
    return hashlib.shake_128(b).digest(n)


def shake256(b, n):
    return hashlib.shake_256(b).digest(n)


def prf(eta, s, b):
    return shake256(s + bytes([b]), 64 * eta)


def bitrev7(i):
    r = 0
    for _ in range(7):
        r = (r << 1) | (i & 1)
        i >>= 1
    return r


ZETAS = [pow(17, bitrev7(i), Q) for i in range(128)]
GAMMAS = [pow(17, 2 * bitrev7(i) + 1, Q) for i in range(128)]


def ntt(f):
    f = list(f)
    i = 1
    length = 128
    while length >= 2:
        for start in range(0, N, 2 * length):
            z = ZETAS[i]
            i += 1
            for j in range(start, start + length):
                t = (z * f[j + length]) % Q
                f[j + length] = (f[j] - t) % Q
                f[j] = (f[j] + t) % Q
        length //= 2
    return f


def inv_ntt(f):
    f = list(f)
    i = 127
    length = 2
    while length <= 128:
        for start in range(0, N, 2 * length):
            z = ZETAS[i]
            i -= 1
            for j in range(start, start + length):
                t = f[j]
                f[j] = (t + f[j + length]) % Q
                f[j + length] = (z * (f[j + length] - t)) % Q
        length *= 2
    return [(x * 3303) % Q for x in f]  # 3303 = 128^-1 mod q


def ntt_mul(a, b):
    c = [0] * N
    for i in range(128):
        a0, a1 = a[2 * i], a[2 * i + 1]
        b0, b1 = b[2 * i], b[2 * i + 1]
        c[2 * i] = (a0 * b0 + a1 * b1 * GAMMAS[i]) % Q
        c[2 * i + 1] = (a0 * b1 + a1 * b0) % Q
    return c


def poly_add(a, b):
    return [(x + y) % Q for x, y in zip(a, b)]


def poly_sub(a, b):
    return [(x - y) % Q for x, y in zip(a, b)]


def sample_ntt(seed34):
    xof = hashlib.shake_128(seed34)
    out = []
    buf = xof.digest(168 * 6)
    pos = 0
    while len(out) < N:
        if pos + 3 > len(buf):
            buf = xof.digest(len(buf) * 2)
        b0, b1, b2 = buf[pos], buf[pos + 1], buf[pos + 2]
        pos += 3
        d1 = b0 + 256 * (b1 % 16)
        d2 = b1 // 16 + 16 * b2
        if d1 < Q:
            out.append(d1)
        if d2 < Q and len(out) < N:
            out.append(d2)
    return out


def sample_cbd(eta, stream):
    assert len(stream) == 64 * eta
    bits = []
    for byte in stream:
        for j in range(8):
            bits.append((byte >> j) & 1)
    f = []
    for i in range(N):
        a = sum(bits[2 * i * eta + j] for j in range(eta))
        b = sum(bits[2 * i * eta + eta + j] for j in range(eta))
        f.append((a - b) % Q)
    return f


def compress(d, x):
    return (((x << (d + 1)) + Q) // (2 * Q)) & ((1 << d) - 1)


def decompress(d, y):
    return ((Q * y) + (1 << (d - 1))) >> d


def byte_encode(d, f):
    bits = []
    for x in f:
        for j in range(d):
            bits.append((x >> j) & 1)
    out = bytearray(len(bits) // 8)
    for i, bit in enumerate(bits):
        out[i // 8] |= bit << (i % 8)
    return bytes(out)


def byte_decode(d, b, check=False):
    bits = []
    for byte in b:
        for j in range(8):
            bits.append((byte >> j) & 1)
    f = []
    for i in range(N):
        x = 0
        for j in range(d):
            x |= bits[i * d + j] << j
        if d == 12:
            if check and x >= Q:
                return None
            x %= Q
        f.append(x)
    return f


def expand_matrix(rho, k):
    return [[sample_ntt(rho + bytes([i, j])) for j in range(k)] for i in range(k)]


def kpke_keygen(d, level):
    p = PARAMS[level]
    k = p["k"]
    g = sha3_512(d + bytes([k]))
    rho, sigma = g[:32], g[32:]
    a = expand_matrix(rho, k)
    n = 0
    s = []
    for _ in range(k):
        s.append(sample_cbd(p["eta1"], prf(p["eta1"], sigma, n)))
        n += 1
    e = []
    for _ in range(k):
        e.append(sample_cbd(p["eta1"], prf(p["eta1"], sigma, n)))
        n += 1
    s_hat = [ntt(v) for v in s]
    e_hat = [ntt(v) for v in e]
    t_hat = []
    for i in range(k):
        acc = [0] * N
        for j in range(k):
            acc = poly_add(acc, ntt_mul(a[j][i], s_hat[j]))
        t_hat.append(poly_add(acc, e_hat[i]))
    ek = b"".join(byte_encode(12, t) for t in t_hat) + rho
    dk = b"".join(byte_encode(12, t) for t in s_hat)
    return ek, dk


def kpke_encrypt(ek, m, r, level):
    p = PARAMS[level]
    k = p["k"]
    t_hat = [byte_decode(12, ek[384 * i:384 * (i + 1)]) for i in range(k)]
    rho = ek[384 * k:]
    a = expand_matrix(rho, k)
    n = 0
    y = []
    for _ in range(k):
        y.append(sample_cbd(p["eta1"], prf(p["eta1"], r, n)))
        n += 1
    e1 = []
    for _ in range(k):
        e1.append(sample_cbd(p["eta2"], prf(p["eta2"], r, n)))
        n += 1
    e2 = sample_cbd(p["eta2"], prf(p["eta2"], r, n))
    y_hat = [ntt(v) for v in y]
    u = []
    for i in range(k):
        acc = [0] * N
        for j in range(k):
            acc = poly_add(acc, ntt_mul(a[i][j], y_hat[j]))
        u.append(poly_add(inv_ntt(acc), e1[i]))
    acc = [0] * N
    for j in range(k):
        acc = poly_add(acc, ntt_mul(t_hat[j], y_hat[j]))
    mu = [decompress(1, b) for b in byte_decode(1, m)]
    v = poly_add(poly_add(inv_ntt(acc), e2), mu)
    c1 = b"".join(byte_encode(p["du"], [compress(p["du"], x) for x in ui]) for ui in u)
    c2 = byte_encode(p["dv"], [compress(p["dv"], x) for x in v])
    return c1 + c2


def kpke_decrypt(dk_pke, c, level):
    p = PARAMS[level]
    k = p["k"]
    du, dv = p["du"], p["dv"]
    step = 32 * du
    u = []
    for i in range(k):
        enc = c[i * step:(i + 1) * step]
        u.append([decompress(du, x) for x in byte_decode(du, enc)])
    v = [decompress(dv, x) for x in byte_decode(dv, c[k * step:])]
    s_hat = [byte_decode(12, dk_pke[384 * i:384 * (i + 1)]) for i in range(k)]
    acc = [0] * N
    for i in range(k):
        acc = poly_add(acc, ntt_mul(s_hat[i], ntt(u[i])))
    w = poly_sub(v, inv_ntt(acc))
    return byte_encode(1, [compress(1, x) for x in w])


def keygen(d, z, level):
    ek, dk_pke = kpke_keygen(d, level)
    dk = dk_pke + ek + sha3_256(ek) + z
    return ek, dk


def encaps(ek, m, level):
    g = sha3_512(m + sha3_256(ek))
    key, r = g[:32], g[32:]
    c = kpke_encrypt(ek, m, r, level)
    return c, key


def decaps(dk, c, level):
    k = PARAMS[level]["k"]
    dk_pke = dk[:384 * k]
    ek = dk[384 * k:768 * k + 32]
    h = dk[768 * k + 32:768 * k + 64]
    z = dk[768 * k + 64:]
    m2 = kpke_decrypt(dk_pke, c, level)
    g = sha3_512(m2 + h)
    key2, r2 = g[:32], g[32:]
    kbar = shake256(z + c, 32)
    c2 = kpke_encrypt(ek, m2, r2, level)
    return key2 if c2 == c else kbar


def cross_validate():
    from cryptography.hazmat.primitives.asymmetric import mlkem

    backends = {
        768: mlkem.MLKEM768PrivateKey,
        1024: mlkem.MLKEM1024PrivateKey,
    }
    for level, cls in backends.items():
        for i in range(12):
            d = sha3_256(b"xval-d|%d|%d" % (level, i))
            z = sha3_256(b"xval-z|%d|%d" % (level, i))
            ref = cls.from_seed_bytes(d + z)
            ek_ref = ref.public_key().public_bytes_raw()
            ek, dk = keygen(d, z, level)
            assert ek == ek_ref, f"keygen mismatch at level {level} vector {i}"
            ss_ref, ct_ref = ref.public_key().encapsulate()
            assert decaps(dk, ct_ref, level) == ss_ref, \
                f"decaps of backend ciphertext mismatch at level {level} vector {i}"
            m = sha3_256(b"xval-m|%d|%d" % (level, i))
            ct, ss = encaps(ek, m, level)
            assert ref.decapsulate(ct) == ss, \
                f"backend decaps of our ciphertext mismatch at level {level} vector {i}"
        print(f"cross-validation against OpenSSL backend OK: ML-KEM-{level} (12 seeds)")

    for level in PARAMS:
        for i in range(4):
            d = sha3_256(b"rt-d|%d|%d" % (level, i))
            z = sha3_256(b"rt-z|%d|%d" % (level, i))
            m = sha3_256(b"rt-m|%d|%d" % (level, i))
            ek, dk = keygen(d, z, level)
            ct, ss = encaps(ek, m, level)
            assert decaps(dk, ct, level) == ss
            bad = bytearray(ct)
            bad[0] ^= 1
            rej = decaps(dk, bytes(bad), level)
            assert rej != ss
            assert rej == shake256(dk[-32:] + bytes(bad), 32)
    print("round-trip and implicit-rejection self-checks OK (all levels)")


def emit(outdir):
    outdir.mkdir(parents=True, exist_ok=True)
    for level in (512, 768, 1024):
        path = outdir / f"mlkem_{level}.rsp"
        with open(path, "w") as f:
            f.write(f"# ML-KEM-{level} known answer vectors\n")
            f.write(f"[ML-KEM-{level}]\n\n")
            for i in range(12):
                d = sha3_256(b"kat-d|%d|%d" % (level, i))
                z = sha3_256(b"kat-z|%d|%d" % (level, i))
                m = sha3_256(b"kat-m|%d|%d" % (level, i))
                ek, dk = keygen(d, z, level)
                ct, ss = encaps(ek, m, level)
                assert decaps(dk, ct, level) == ss
                f.write(f"count = {i}\n")
                f.write(f"d = {d.hex()}\n")
                f.write(f"z = {z.hex()}\n")
                f.write(f"m = {m.hex()}\n")
                f.write(f"ek = {ek.hex()}\n")
                f.write(f"dk = {dk.hex()}\n")
                f.write(f"ct = {ct.hex()}\n")
                f.write(f"ss = {ss.hex()}\n\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/kat")
    cross_validate()
    emit(out)

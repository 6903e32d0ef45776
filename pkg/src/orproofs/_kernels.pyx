# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hashing kernels over OpenSSL's SHA-256.

Same contract as ``_kernels_py``; selected at import by ``orproofs.kernels``.
"""
from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize, PyBytes_GET_SIZE
from libc.string cimport memcpy


cdef extern from "openssl/sha.h" nogil:
    ctypedef struct SHA256_CTX:
        pass
    int SHA256_Init(SHA256_CTX *c)
    int SHA256_Update(SHA256_CTX *c, const void *data, size_t n)
    int SHA256_Final(unsigned char *md, SHA256_CTX *c)


cdef unsigned char LEAF = 0x00
cdef unsigned char NODE = 0x01


cdef inline bytes _node(const char *left, const char *right):
    cdef SHA256_CTX ctx
    cdef unsigned char md[32]
    SHA256_Init(&ctx)
    SHA256_Update(&ctx, &NODE, 1)
    SHA256_Update(&ctx, left, 32)
    SHA256_Update(&ctx, right, 32)
    SHA256_Final(md, &ctx)
    return PyBytes_FromStringAndSize(<char *>md, 32)


def leaf_digests(blocks):
    cdef SHA256_CTX ctx
    cdef unsigned char md[32]
    cdef bytes b
    out = []
    for item in blocks:
        b = bytes(item)
        SHA256_Init(&ctx)
        SHA256_Update(&ctx, &LEAF, 1)
        SHA256_Update(&ctx, PyBytes_AS_STRING(b), PyBytes_GET_SIZE(b))
        SHA256_Final(md, &ctx)
        out.append(PyBytes_FromStringAndSize(<char *>md, 32))
    return out


def parent_level(list level):
    cdef Py_ssize_t n = len(level), j
    cdef bytes left, right
    if n % 2:
        raise ValueError("level length must be even")
    out = []
    for j in range(0, n, 2):
        left = level[j]
        right = level[j + 1]
        if PyBytes_GET_SIZE(left) != 32 or PyBytes_GET_SIZE(right) != 32:
            raise ValueError("digests must be 32 bytes")
        out.append(_node(PyBytes_AS_STRING(left), PyBytes_AS_STRING(right)))
    return out


def fold_path(bytes leaf, siblings, lefts):
    cdef bytes cur = leaf
    cdef bytes sib
    if PyBytes_GET_SIZE(cur) != 32:
        raise ValueError("digests must be 32 bytes")
    for sib_obj, on_left in zip(siblings, lefts):
        sib = sib_obj
        if PyBytes_GET_SIZE(sib) != 32:
            raise ValueError("digests must be 32 bytes")
        if on_left:
            cur = _node(PyBytes_AS_STRING(sib), PyBytes_AS_STRING(cur))
        else:
            cur = _node(PyBytes_AS_STRING(cur), PyBytes_AS_STRING(sib))
    return cur

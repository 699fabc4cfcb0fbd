def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def is_p_power(n: int, p: int) -> bool:
    """True for n = p^k, k >= 0."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1

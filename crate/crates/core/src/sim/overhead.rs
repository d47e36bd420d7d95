/// Per-packet coding header size of each scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverheadScheme {
    /// XOR coding vector plus the collision decoding header.
    Jnc,
    /// One bit per receiver.
    Xor,
    /// A `B`-entry coefficient vector over GF(q).
    DncQ,
}

/// Header bits for `scheme`. For `DncQ`, `q` must be at least 2; fields that
/// are not powers of two round the symbol width up.
pub fn overhead_bits(scheme: OverheadScheme, n: u64, b: u64, q: u64) -> u64 {
    match scheme {
        OverheadScheme::Jnc => 128 + 2 * n,
        OverheadScheme::Xor => n,
        OverheadScheme::DncQ => {
            assert!(q >= 2, "field size must be at least 2");
            b * (u64::BITS - (q - 1).leading_zeros()) as u64
        }
    }
}

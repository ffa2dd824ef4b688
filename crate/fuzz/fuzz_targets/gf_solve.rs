#![no_main]

use libfuzzer_sys::fuzz_target;
use snc::gf::{GfError, GfMatrix, PrimeField};

// Byte 0 picks q, byte 1 the shape, then entries, then the right-hand side.
fuzz_target!(|data: &[u8]| {
    let [qi, shape, rest @ ..] = data else { return };
    let q = [2u64, 3, 5, 7, 11, 13, 101, 65537][*qi as usize % 8];
    let field = PrimeField::new(q).unwrap();
    let rows = 1 + (*shape as usize >> 4) % 8;
    let cols = 1 + (*shape as usize & 15) % 8;
    if rest.len() < rows * cols + rows {
        return;
    }
    let entries: Vec<u32> = rest[..rows * cols]
        .iter()
        .map(|&b| u32::from(b) % q as u32)
        .collect();
    let rhs: Vec<u32> = rest[rows * cols..rows * cols + rows]
        .iter()
        .map(|&b| u32::from(b))
        .collect();
    let a = GfMatrix::from_flat(field, rows, cols, entries).unwrap();
    let rank = a.rank();
    assert_eq!(a.independent_rows().len(), rank);
    match a.solve(&rhs) {
        Ok(x) => {
            assert_eq!(rank, cols);
            let want: Vec<u32> = rhs.iter().map(|&v| v % q as u32).collect();
            assert_eq!(a.mul_vec(&x).unwrap(), want);
        }
        Err(GfError::Unsolvable { rank: r, .. }) => assert!(r == rank && rank < cols),
        Err(GfError::Inconsistent { .. }) => assert_eq!(rank, cols),
        Err(e) => panic!("unexpected {e}"),
    }
});

use normcat::arith::cache::{read_spf_cache, write_spf_cache};
use normcat::arith::SpfSieve;
use normcat::wordstream::{read_digit_dump, write_digit_dump, Alphabet, DigitOrder};
use normcat::Error;

#[test]
fn spf_cache_round_trip() {
    let sieve = SpfSieve::new(5000).unwrap();
    let mut buf = Vec::new();
    write_spf_cache(&sieve, &mut buf).unwrap();
    assert_eq!(&buf[..5], b"NFSV1");
    assert_eq!(u64::from_le_bytes(buf[5..13].try_into().unwrap()), 5000);
    assert_eq!(buf.len(), 13 + 4 * 4999);
    let back = read_spf_cache(&buf[..]).unwrap();
    assert_eq!(back.table(), sieve.table());
    assert_eq!(back.primes(), sieve.primes());
}

#[test]
fn spf_cache_rejects_damage() {
    let sieve = SpfSieve::new(100).unwrap();
    let mut buf = Vec::new();
    write_spf_cache(&sieve, &mut buf).unwrap();

    let mut bad_magic = buf.clone();
    bad_magic[0] = b'X';
    assert!(matches!(read_spf_cache(&bad_magic[..]), Err(Error::Format { .. })));

    assert!(read_spf_cache(&buf[..buf.len() - 1]).is_err());

    // claim 91 is prime
    let mut bad_entry = buf.clone();
    let at = 13 + 4 * (91 - 2);
    bad_entry[at..at + 4].copy_from_slice(&91u32.to_le_bytes());
    assert!(read_spf_cache(&bad_entry[..]).is_err());
}

#[test]
fn digit_dump_round_trip() {
    let g = Alphabet::new(16).unwrap();
    let digits: Vec<u8> = (0..1000u32).map(|i| (i * 7 % 16) as u8).collect();
    let mut buf = Vec::new();
    write_digit_dump(&mut buf, g, DigitOrder::PaperOrder, &digits).unwrap();
    assert_eq!(&buf[..4], b"NFDG");
    assert_eq!(u16::from_le_bytes([buf[4], buf[5]]), 16);
    assert_eq!(buf[6], 1);
    assert_eq!(buf.len(), 15 + digits.len());
    let dump = read_digit_dump(&buf[..]).unwrap();
    assert_eq!(dump.alphabet, g);
    assert_eq!(dump.order, DigitOrder::PaperOrder);
    assert_eq!(dump.digits, digits);
}

#[test]
fn digit_dump_rejects_out_of_range_digit() {
    let g = Alphabet::new(10).unwrap();
    let mut buf = Vec::new();
    write_digit_dump(&mut buf, g, DigitOrder::MostSignificantFirst, &[1, 2, 3]).unwrap();
    let last = buf.len() - 1;
    buf[last] = 10;
    assert!(read_digit_dump(&buf[..]).is_err());
}

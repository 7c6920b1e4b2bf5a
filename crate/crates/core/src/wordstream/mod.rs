//! Base-`g` words of integers and the concatenated digit streams built from them.

pub mod dump;
pub mod stream;
pub mod word;

pub use dump::{read_digit_dump, write_digit_dump, DigitDump};
pub use stream::{range_digits, stream_digits, truncate, CursorPosition, Cut, StreamCursor, StreamWord, Truncation};
pub use word::{
    count_occurrences, digits_are_eps_k_normal, index_to_window, is_eps_k_normal, kgram_indices, nu, push_digits,
    render_digits, to_word, window_index, word_length, Alphabet, DigitOrder, Word,
};

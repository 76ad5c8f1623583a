"""Erasure and fountain codes: Reed-Solomon, random linear, LT, Raptor and triangular."""

from ._core import (
    CodecConfig,
    CodedPacket,
    ConstructionError,
    Decoder,
    DecodeStatus,
    DomainError,
    DuplicatePacketError,
    Encoder,
    FountainError,
    InputBlock,
    InsufficientPacketsError,
    ParameterError,
    ParseError,
    Scheme,
    SessionReport,
    SingularMatrixError,
    UsageError,
    bench_csv,
    decode,
    deserialize,
    encode,
    make_decoder,
    make_decoder_for,
    make_encoder,
    rl_expected_extra,
    rl_success_probability,
    run_arq_baseline,
    run_cli,
    run_session,
)

__all__ = [name for name in dir() if not name.startswith("_")]

import pytest

from wire_format import (
    FLAG_NO_RELAY,
    PAYLOAD_SIZE,
    REPAIR_MAX_IDS,
    Message,
    MessageType,
    decode,
    encode,
)


def test_every_type_encodes_to_nine_bytes():
    for kind in MessageType:
        payload = encode(Message(kind))
        assert len(payload) == PAYLOAD_SIZE, f"{kind.name}: {len(payload)} байт"
        assert payload[0] >> 4 == int(kind)


def test_relay_without_neighbor_sets_flag():
    msg = decode(encode(Message(MessageType.SR1A_RELAY, FLAG_NO_RELAY, sender_id=17, nonce=200)))
    assert msg.sender_id == 17
    assert msg.nonce == 200
    assert not msg.has_relay


def test_relay_fields():
    msg = decode(encode(Message(MessageType.SR1A_RELAY, sender_id=1, nonce=2, relay_id=3, relay_nonce=4)))
    assert msg.has_relay
    assert (msg.relay_id, msg.relay_nonce) == (3, 4)


def test_repair_chunk_size_goes_to_flags():
    payload = encode(Message(MessageType.SR1B_REPAIR, sender_id=9, neighbor_ids=(1, 2, 3)))
    assert payload[0] & 0xF == 3
    assert decode(payload).neighbor_ids == (1, 2, 3)


def test_repair_chunk_limit():
    with pytest.raises(ValueError):
        encode(Message(MessageType.SR1B_REPAIR, neighbor_ids=tuple(range(REPAIR_MAX_IDS + 1))))


def test_token_uses_all_68_bits():
    token = (1 << 68) - 3
    assert decode(encode(Message(MessageType.SR2A_TOKEN, token=token))).token == token
    with pytest.raises(ValueError):
        encode(Message(MessageType.SR2A_TOKEN, token=1 << 68))


def test_count_carries_sender_position():
    msg = decode(encode(Message(MessageType.SR2B_COUNT_NEARCORNER, count=26, c1=25, c2=0, c3=0, position=1)))
    assert msg.type == MessageType.SR2B_COUNT_NEARCORNER
    assert (msg.count, msg.c1, msg.c2, msg.c3, msg.position) == (26, 25, 0, 0, 1)


def test_totals_and_coord_12bit_fields():
    totals = decode(encode(Message(MessageType.SR2B_TOTALS, sender_count=62, total=62, c1=25, c2=32, c3=56)))
    assert (totals.sender_count, totals.total, totals.c1, totals.c2, totals.c3) == (62, 62, 25, 32, 56)

    coord = decode(encode(Message(MessageType.SR2C_COORD, sender_id=5, x=40, y=25, width=40, height=25)))
    assert (coord.sender_id, coord.x, coord.y, coord.width, coord.height) == (5, 40, 25, 40, 25)

    with pytest.raises(ValueError):
        encode(Message(MessageType.SR2C_COORD, x=4096))


def test_sync_target_phase():
    assert decode(encode(Message(MessageType.SYNC, target_phase=85))).target_phase == 85


def test_decode_rejects_garbage():
    with pytest.raises(ValueError):
        decode(b"\x00" * 8)
    with pytest.raises(ValueError):
        decode(bytes([0xF0]) + b"\x00" * 8)


def test_byte_fields_are_checked():
    with pytest.raises(ValueError):
        encode(Message(MessageType.SR1A_ID, sender_id=256))

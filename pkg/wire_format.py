"""
Формат сообщений роя: 9 байт полезной нагрузки.

Байт 0 - заголовок: старший полубайт = тип сообщения (0-10),
младший полубайт = флаги (смысл зависит от типа).
Байты 1-8 - поля сообщения, раскладка по типам описана в encode().
"""
import struct
from dataclasses import dataclass, field
from enum import IntEnum

PAYLOAD_SIZE = 9
TOKEN_BITS = 68
FIELD12_MAX = (1 << 12) - 1

# Флаг SR1A_RELAY: в сообщении нет пересылаемого соседа
FLAG_NO_RELAY = 0x1
REPAIR_MAX_IDS = 7


class MessageType(IntEnum):
    SR1A_ID = 0
    SR1A_RELAY = 1
    SR1B_REPAIR = 2
    SR1C_COUNT = 3
    SR2A_TOKEN = 4
    SR2A_AXES = 5
    SR2B_COUNT = 6
    SR2B_COUNT_NEARCORNER = 7
    SR2B_TOTALS = 8
    SR2C_COORD = 9
    SYNC = 10


@dataclass(slots=True)
class Message:
    """Одно широковещательное сообщение в разобранном виде.

    Заполнены только поля, относящиеся к типу сообщения, остальные равны 0.
    """
    type: MessageType
    flags: int = 0
    sender_id: int = 0
    nonce: int = 0
    relay_id: int = 0
    relay_nonce: int = 0
    neighbor_ids: tuple = field(default_factory=tuple)
    neighbor_count: int = 0
    position: int = 0
    token: int = 0
    x: int = 0
    y: int = 0
    lower_id_border: int = 0
    count: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0
    sender_count: int = 0
    total: int = 0
    width: int = 0
    height: int = 0
    target_phase: int = 0

    @property
    def has_relay(self):
        return self.type == MessageType.SR1A_RELAY and not (self.flags & FLAG_NO_RELAY)


def _check_byte(name, value):
    if not 0 <= value <= 0xFF:
        raise ValueError(f"{name}={value} не помещается в байт")
    return value


def _check_field12(name, value):
    if not 0 <= value <= FIELD12_MAX:
        raise ValueError(f"{name}={value} не помещается в 12 бит")
    return value


def _pack12(values):
    packed = 0
    for value in values:
        packed = (packed << 12) | value
    return packed


def _unpack12(packed, count):
    values = []
    for shift in range(12 * (count - 1), -1, -12):
        values.append((packed >> shift) & FIELD12_MAX)
    return values


def encode(msg):
    """Кодирует сообщение в ровно 9 байт"""
    flags = msg.flags & 0xF
    kind = MessageType(msg.type)
    body = b""

    if kind == MessageType.SR1A_ID:
        body = bytes([_check_byte("sender_id", msg.sender_id)])

    elif kind == MessageType.SR1A_RELAY:
        body = bytes([
            _check_byte("sender_id", msg.sender_id),
            _check_byte("nonce", msg.nonce),
            _check_byte("relay_id", msg.relay_id),
            _check_byte("relay_nonce", msg.relay_nonce),
        ])

    elif kind == MessageType.SR1B_REPAIR:
        ids = tuple(msg.neighbor_ids)
        if len(ids) > REPAIR_MAX_IDS:
            raise ValueError(f"в сообщении ремонта не больше {REPAIR_MAX_IDS} ID")
        flags = len(ids)
        body = bytes([_check_byte("sender_id", msg.sender_id)] + [_check_byte("neighbor_id", i) for i in ids])

    elif kind == MessageType.SR1C_COUNT:
        body = bytes([
            _check_byte("sender_id", msg.sender_id),
            _check_byte("neighbor_count", msg.neighbor_count),
            _check_byte("position", msg.position),
        ])

    elif kind == MessageType.SR2A_TOKEN:
        if not 0 <= msg.token < (1 << TOKEN_BITS):
            raise ValueError("токен не помещается в 68 бит")
        # Старшие 4 бита токена делят байт с заголовком
        flags = msg.token >> 64
        body = struct.pack(">Q", msg.token & ((1 << 64) - 1))

    elif kind == MessageType.SR2A_AXES:
        body = bytes([
            _check_byte("sender_id", msg.sender_id),
            _check_byte("x", msg.x),
            _check_byte("y", msg.y),
            _check_byte("lower_id_border", msg.lower_id_border),
        ])

    elif kind in (MessageType.SR2B_COUNT, MessageType.SR2B_COUNT_NEARCORNER):
        for name in ("count", "c1", "c2", "c3"):
            if not 0 <= getattr(msg, name) <= 0xFFFF:
                raise ValueError(f"{name} не помещается в 16 бит")
        # Младший полубайт заголовка - группа позиции отправителя
        flags = msg.position
        body = struct.pack(">HHHH", msg.count, msg.c1, msg.c2, msg.c3)

    elif kind == MessageType.SR2B_TOTALS:
        values = [
            _check_field12(name, getattr(msg, name))
            for name in ("sender_count", "total", "c1", "c2", "c3")
        ]
        body = struct.pack(">Q", _pack12(values))

    elif kind == MessageType.SR2C_COORD:
        values = [
            _check_field12(name, getattr(msg, name))
            for name in ("x", "y", "width", "height")
        ]
        body = bytes([_check_byte("sender_id", msg.sender_id)]) + _pack12(values).to_bytes(6, "big")

    elif kind == MessageType.SYNC:
        if not 0 <= msg.target_phase <= 0xFFFF:
            raise ValueError("target_phase не помещается в 16 бит")
        body = struct.pack(">H", msg.target_phase)

    header = bytes([(int(kind) << 4) | (flags & 0xF)])
    return (header + body).ljust(PAYLOAD_SIZE, b"\x00")


def decode(payload):
    """Разбирает 9 байт обратно в Message. ValueError для мусора"""
    if len(payload) != PAYLOAD_SIZE:
        raise ValueError(f"ожидалось {PAYLOAD_SIZE} байт, получено {len(payload)}")

    tag, flags = payload[0] >> 4, payload[0] & 0xF
    try:
        kind = MessageType(tag)
    except ValueError:
        raise ValueError(f"неизвестный тип сообщения {tag}") from None
    body = payload[1:]

    if kind == MessageType.SR1A_ID:
        return Message(kind, flags, sender_id=body[0])

    if kind == MessageType.SR1A_RELAY:
        return Message(kind, flags, sender_id=body[0], nonce=body[1],
                       relay_id=body[2], relay_nonce=body[3])

    if kind == MessageType.SR1B_REPAIR:
        if flags > REPAIR_MAX_IDS:
            raise ValueError("неверное число ID в сообщении ремонта")
        return Message(kind, flags, sender_id=body[0], neighbor_ids=tuple(body[1:1 + flags]))

    if kind == MessageType.SR1C_COUNT:
        return Message(kind, flags, sender_id=body[0], neighbor_count=body[1], position=body[2])

    if kind == MessageType.SR2A_TOKEN:
        low, = struct.unpack(">Q", body)
        return Message(kind, 0, token=(flags << 64) | low)

    if kind == MessageType.SR2A_AXES:
        return Message(kind, flags, sender_id=body[0], x=body[1], y=body[2], lower_id_border=body[3])

    if kind in (MessageType.SR2B_COUNT, MessageType.SR2B_COUNT_NEARCORNER):
        count, c1, c2, c3 = struct.unpack(">HHHH", body)
        return Message(kind, flags, count=count, c1=c1, c2=c2, c3=c3, position=flags)

    if kind == MessageType.SR2B_TOTALS:
        packed, = struct.unpack(">Q", body)
        sender_count, total, c1, c2, c3 = _unpack12(packed, 5)
        return Message(kind, flags, sender_count=sender_count, total=total, c1=c1, c2=c2, c3=c3)

    if kind == MessageType.SR2C_COORD:
        x, y, width, height = _unpack12(int.from_bytes(body[1:7], "big"), 4)
        return Message(kind, flags, sender_id=body[0], x=x, y=y, width=width, height=height)

    # SYNC
    target, = struct.unpack(">H", body[:2])
    return Message(kind, flags, target_phase=target)

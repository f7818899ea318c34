#!/usr/bin/env python3
"""Regenerates the miniature corpora under tests/data.

Audio content is a quiet two-tone signal; extraction only depends on the
annotations and the audio length.
"""
import math
import pathlib
import struct
import wave

HERE = pathlib.Path(__file__).resolve().parent
RATE = 16000


def write_wav(path, n):
    path.parent.mkdir(parents=True, exist_ok=True)
    frames = bytearray()
    for i in range(n):
        v = 0.2 * math.sin(2 * math.pi * 220 * i / RATE) + 0.1 * math.sin(2 * math.pi * 1300 * i / RATE)
        frames += struct.pack("<h", int(round(v * 32767)))
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(RATE)
        w.writeframes(bytes(frames))


def timit(stem, phones, words):
    base = HERE / "english_mini" / stem
    base.parent.mkdir(parents=True, exist_ok=True)
    base.with_suffix(".phn").write_text("".join(f"{s} {e} {p}\n" for s, e, p in phones))
    base.with_suffix(".wrd").write_text("".join(f"{s} {e} {w}\n" for s, e, w in words))
    write_wav(base.with_suffix(".wav"), phones[-1][1])


def english():
    timit("dr1/mabc0/si1",
          [(0, 2000, "h#"), (2000, 2600, "bcl"), (2600, 2800, "b"), (2800, 4800, "ae"), (4800, 5400, "dcl"),
           (5400, 5800, "d"), (5800, 6400, "bcl"), (6400, 6600, "b"), (6600, 8600, "ae"), (8600, 9800, "n"),
           (9800, 11000, "h#")],
          [(2000, 5800, "bad"), (5800, 9800, "ban")])
    timit("dr1/mabc0/sx2",
          [(0, 1500, "h#"), (1500, 2000, "dh"), (2000, 2600, "ax"), (2600, 3200, "kcl"), (3200, 3500, "k"),
           (3500, 5300, "ae"), (5300, 5900, "tcl"), (5900, 6300, "t"), (6300, 7500, "ih"), (7500, 8400, "n"),
           (8400, 9600, "h#")],
          [(1500, 2600, "the"), (2600, 6300, "cat"), (6300, 8400, "in")])
    timit("dr1/mabc0/sa1",
          [(0, 1000, "h#"), (1000, 1500, "bcl"), (1500, 1700, "b"), (1700, 3500, "ae"), (3500, 4500, "n"),
           (4500, 5500, "h#")],
          [(1000, 4500, "ban")])
    timit("dr2/fxyz0/si3",
          [(0, 1000, "h#"), (1000, 2000, "s"), (2000, 3400, "ih"), (3400, 4400, "ng"), (4400, 4900, "hh"),
           (4900, 6200, "ae"), (6200, 6800, "pcl"), (6800, 7100, "p"), (7100, 7800, "ax"), (7800, 8800, "n"),
           (8800, 9600, "m"), (9600, 18000, "ae"), (18000, 19000, "n"), (19000, 20000, "h#")],
          [(1000, 4400, "sing"), (4400, 8800, "happen"), (8800, 19000, "man")])


def french():
    root = HERE / "french_mini"
    root.mkdir(parents=True, exist_ok=True)
    utts = {
        "fr_pote": [[("p", .10, .18), ("O", .18, .38), ("t", .38, .46)]],
        "fr_bon_ami": [[("b", .10, .16), ("O", .16, .34), ("n", .34, .42)],
                       [("a", .42, .56), ("m", .56, .64), ("i", .64, .80)]],
        "fr_ponte": [[("p", .10, .18), ("o~", .18, .40), ("t", .40, .48)]],
        "fr_mon_ami": [[("m", .10, .18), ("o~", .18, .38), ("n", .38, .46)],
                       [("a", .46, .60), ("m", .60, .68), ("i", .68, .84)]],
        "fr_tomate": [[("t", .10, .16), ("o", .16, .26), ("m", .26, .34), ("a", .34, .50), ("t", .50, .58)]],
        "fr_mode": [[("m", .10, .18), ("O", .18, .78), ("d", .78, .86)]],
        "fr_sa_bon": [[("b", .10, .16), ("O", .16, .34), ("n", .34, .42)]],
    }
    rows = ["utterance,word_index,phone,start_sec,end_sec"]
    for utt, words in utts.items():
        rows.append(f"{utt},,sil,0.00,0.10")
        end = 0.10
        for wi, phones in enumerate(words):
            for p, s, e in phones:
                rows.append(f"{utt},{wi},{p},{s:.2f},{e:.2f}")
                end = e
        rows.append(f"{utt},,sil,{end:.2f},{end + 0.10:.2f}")
        write_wav(root / f"{utt}.wav", int(round((end + 0.10) * RATE)))
    (root / "alignment.csv").write_text("\n".join(rows) + "\n")
    (root / "utterances.csv").write_text("utterance,flags\nfr_sa_bon,sa\nfr_pote,\n")


if __name__ == "__main__":
    english()
    french()

# kloost: суммы Клоостермана над GF(2^r), ортогональные группы и весовые спектры кодов

int checksum ( int count , int scale ) {
  if ( scale == count ) {
    scale = scale - 1 ;
    scale = count * count ;
  }
  while ( scale > count ) {
    return count ;
  }
  int width = scale + 2 ;
  if ( width == width ) {
    scale = width - 1 ;
    return 2 ;
  }
  while ( scale > scale ) {
    width = scale * count ;
  }
  return width ;
}
